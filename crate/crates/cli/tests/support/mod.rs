//! Dense reference implementations used as oracles. They share no code with
//! the library beyond the public data types.

#![allow(dead_code)]

pub type Dense = Vec<Vec<f64>>;

pub fn zeros(n: usize, m: usize) -> Dense {
    vec![vec![0.0; m]; n]
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut c = zeros(n, m);
    for i in 0..n {
        for t in 0..k {
            let av = a[i][t];
            if av == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += av * b[t][j];
            }
        }
    }
    c
}

/// Dense symmetric weight matrix from an undirected edge list.
pub fn dense_weights(n: usize, edges: &[(usize, usize, f64)]) -> Dense {
    let mut w = zeros(n, n);
    for &(a, b, v) in edges {
        w[a][b] = v;
        w[b][a] = v;
    }
    w
}

/// Shift operator from first principles. `kind` is one of `adjacency`,
/// `transition`, `laplacian`. Zero-degree rows: transition row is zero,
/// laplacian row is the identity row.
pub fn dense_operator(w: &Dense, kind: &str) -> Dense {
    let n = w.len();
    let deg: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
    let mut a = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[i][j] = match kind {
                "adjacency" => w[i][j],
                "transition" => {
                    if deg[i] > 0.0 {
                        w[i][j] / deg[i]
                    } else {
                        0.0
                    }
                }
                "laplacian" => {
                    let s = |d: f64| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 };
                    let id = if i == j { 1.0 } else { 0.0 };
                    id - s(deg[i]) * w[i][j] * s(deg[j])
                }
                other => panic!("unknown operator {other}"),
            };
        }
    }
    a
}

/// `‖row i of (F − A F)‖²`.
pub fn dense_influence(a: &Dense, f: &Dense) -> Vec<f64> {
    let af = matmul(a, f);
    f.iter()
        .zip(&af)
        .map(|(fr, ar)| fr.iter().zip(ar).map(|(x, y)| (x - y) * (x - y)).sum())
        .collect()
}

/// p-hop variant by explicit matrix powers of the normalized adjacency:
/// `P = [A_nᵖ > 0]`, `M = diag(row counts of P)`, `f1 = M⁻¹Pf`,
/// `f_filter = f1 − M⁻¹P f1`, scores `|f_filter|` divided by their max.
pub fn dense_phop(w: &Dense, f: &[f64], p: usize) -> Vec<f64> {
    let n = w.len();
    let an = dense_operator(w, "transition");
    let mut power = an.clone();
    for _ in 1..p {
        power = matmul(&power, &an);
    }
    let mask: Vec<Vec<bool>> = power.iter().map(|r| r.iter().map(|v| *v > 0.0).collect()).collect();
    let smooth = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let cols: Vec<usize> = (0..n).filter(|&j| mask[i][j]).collect();
                if cols.is_empty() {
                    0.0
                } else {
                    cols.iter().map(|&j| x[j]).sum::<f64>() / cols.len() as f64
                }
            })
            .collect()
    };
    let f1 = smooth(f);
    let f2 = smooth(&f1);
    let raw: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| (a - b).abs()).collect();
    let max = raw.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        raw.iter().map(|v| v / max).collect()
    } else {
        raw
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Median heuristic over the pooled sample, falling back to the mean
/// positive distance and then to 1.
pub fn median_bandwidth(pool: &[Vec<f64>]) -> f64 {
    let mut d = Vec::new();
    for i in 0..pool.len() {
        for j in (i + 1)..pool.len() {
            d.push(dist(&pool[i], &pool[j]));
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    let m = median(&d);
    if m > 0.0 {
        return m;
    }
    let pos: Vec<f64> = d.into_iter().filter(|x| *x > 0.0).collect();
    if pos.is_empty() {
        1.0
    } else {
        pos.iter().sum::<f64>() / pos.len() as f64
    }
}

/// Biased MMD² as an explicit double loop over every pair.
pub fn brute_mmd2(a: &[Vec<f64>], b: &[Vec<f64>], sigma: f64) -> f64 {
    let k = |x: &[f64], y: &[f64]| (-dist(x, y).powi(2) / (2.0 * sigma * sigma)).exp();
    let mut xx = 0.0;
    for x in a {
        for y in a {
            xx += k(x, y);
        }
    }
    let mut yy = 0.0;
    for x in b {
        for y in b {
            yy += k(x, y);
        }
    }
    let mut xy = 0.0;
    for x in a {
        for y in b {
            xy += k(x, y);
        }
    }
    let (m, n) = (a.len() as f64, b.len() as f64);
    (xx / (m * m) + yy / (n * n) - 2.0 * xy / (m * n)).max(0.0)
}
