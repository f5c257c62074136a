//! Independent reference computations shared by integration tests. Nothing
//! here calls into the library's algorithms.
#![allow(dead_code)]

use num_complex::Complex64;

/// Partitions with `rows` parts, each at most `max`, weakly decreasing.
pub fn partitions(rows: usize, max: u32) -> Vec<Vec<u32>> {
    fn go(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == rows {
            out.push(cur.clone());
            return;
        }
        for p in 0..=max {
            cur.push(p);
            go(rows, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(rows, max, &mut Vec::new(), &mut out);
    out
}

/// Partitions with `rows` parts and total size `size`.
pub fn partitions_of_size(rows: usize, size: u32) -> Vec<Vec<u32>> {
    partitions(rows, size).into_iter().filter(|p| p.iter().sum::<u32>() == size).collect()
}

/// Littlewood–Richardson number `c^κ_{λ μ}` for GL partitions by counting
/// skew tableaux of shape `κ/λ` and content `μ` whose reverse reading word
/// is a lattice word.
pub fn lr_tableaux(lambda: &[u32], mu: &[u32], kappa: &[u32]) -> u64 {
    let rows = kappa.len().max(lambda.len()).max(mu.len());
    let pad = |p: &[u32]| {
        let mut v = p.to_vec();
        v.resize(rows, 0);
        v
    };
    let (lambda, mu, kappa) = (pad(lambda), pad(mu), pad(kappa));
    if lambda.iter().zip(&kappa).any(|(l, k)| l > k) {
        return 0;
    }
    if kappa.iter().sum::<u32>() != lambda.iter().sum::<u32>() + mu.iter().sum::<u32>() {
        return 0;
    }
    // cells in reading order: top row first, right to left
    let mut cells = Vec::new();
    for i in 0..rows {
        for j in (lambda[i]..kappa[i]).rev() {
            cells.push((i, j as usize));
        }
    }
    let width = kappa.first().copied().unwrap_or(0) as usize;
    let mut grid = vec![vec![0u32; width]; rows];
    let mut count = vec![0u32; rows + 1];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        lambda: &[u32],
        mu: &[u32],
        grid: &mut Vec<Vec<u32>>,
        count: &mut Vec<u32>,
    ) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (i, j) = cells[k];
        let mut total = 0;
        for v in 1..=mu.len() as u32 {
            let vi = v as usize;
            if count[vi] >= mu[vi - 1] {
                continue;
            }
            // lattice condition
            if vi > 1 && count[vi] + 1 > count[vi - 1] {
                continue;
            }
            // row weakly increasing: the cell to the right was filled before
            if j + 1 < grid[i].len() && grid[i][j + 1] != 0 && grid[i][j + 1] < v {
                continue;
            }
            // column strictly increasing against the cell above when it is skew
            if i > 0 && (j as u32) >= lambda[i - 1] && grid[i - 1][j] >= v {
                continue;
            }
            grid[i][j] = v;
            count[vi] += 1;
            total += go(k + 1, cells, lambda, mu, grid, count);
            count[vi] -= 1;
            grid[i][j] = 0;
        }
        total
    }
    go(0, &cells, &lambda, &mu, &mut grid, &mut count)
}

/// Multiplicity of the `sl_r` irreducible `ν` in `V_λ ⊗ V_μ`, with weights
/// given as `r - 1` parts.
pub fn sl_lr(r: usize, lambda: &[u32], mu: &[u32], nu: &[u32]) -> u64 {
    let total = lambda.iter().sum::<u32>() + mu.iter().sum::<u32>();
    let nu_size = nu.iter().sum::<u32>();
    if total < nu_size || (total - nu_size) % r as u32 != 0 {
        return 0;
    }
    let c = (total - nu_size) / r as u32;
    let mut kappa: Vec<u32> = nu.iter().map(|x| x + c).collect();
    kappa.push(c);
    lr_tableaux(lambda, mu, &kappa)
}

/// Modular S-matrix of `sl_r` at level `ℓ` with rows indexed by
/// `partitions(r - 1, ℓ)`, from the Weyl-alternant formula and normalized by
/// unitarity of the vacuum row.
pub struct SMatrix {
    pub weights: Vec<Vec<u32>>,
    pub s: Vec<Vec<Complex64>>,
}

fn shifted(r: usize, w: &[u32]) -> Vec<f64> {
    let x: Vec<f64> = (0..r).map(|a| w.get(a).copied().unwrap_or(0) as f64 + (r - 1 - a) as f64).collect();
    let mean = x.iter().sum::<f64>() / r as f64;
    x.into_iter().map(|v| v - mean).collect()
}

fn det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut out = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].norm().partial_cmp(&m[b][c].norm()).unwrap()).unwrap();
        if m[p][c].norm() < 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            out = -out;
        }
        out *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                let t = m[c][j] * f;
                m[i][j] -= t;
            }
        }
    }
    out
}

impl SMatrix {
    pub fn new(r: usize, level: u32) -> Self {
        let weights = partitions(r - 1, level);
        let k = (level as usize + r) as f64;
        let raw: Vec<Vec<Complex64>> = weights
            .iter()
            .map(|l| {
                let x = shifted(r, l);
                weights
                    .iter()
                    .map(|m| {
                        let y = shifted(r, m);
                        let mat = (0..r)
                            .map(|a| {
                                (0..r)
                                    .map(|b| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * x[a] * y[b] / k))
                                    .collect()
                            })
                            .collect();
                        det(mat)
                    })
                    .collect()
            })
            .collect();
        let norm = raw[0].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let phase = raw[0][0] / raw[0][0].norm();
        let s = raw.into_iter().map(|row| row.into_iter().map(|z| z / (phase * norm)).collect()).collect();
        Self { weights, s }
    }

    fn index(&self, w: &[u32]) -> usize {
        self.weights.iter().position(|x| x == w).expect("weight in P_l")
    }

    /// `Σ_μ S_{0μ}^{2-2g-n} Π_i S_{λ_i μ}`, rounded after checking it is
    /// numerically an integer.
    pub fn verlinde(&self, g: u32, labels: &[Vec<u32>]) -> u64 {
        let e = 2 - 2 * g as i32 - labels.len() as i32;
        let idx: Vec<usize> = labels.iter().map(|l| self.index(l)).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 0..self.weights.len() {
            let mut term = self.s[0][m].powi(e);
            for &i in &idx {
                term *= self.s[i][m];
            }
            sum += term;
        }
        let v = sum.re.round();
        assert!((sum.re - v).abs() < 1e-6 && sum.im.abs() < 1e-6, "non-integral Verlinde value {sum}");
        v as u64
    }
}
