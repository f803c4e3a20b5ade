//! Brute-force reference evaluation of the modification and combination
//! rules. Complex numbers are bare `(re, im)` pairs, QBPAs are dense vectors
//! indexed by subset mask, and every sum enumerates the whole power set.
//! Nothing here calls into the library's arithmetic.

#![allow(dead_code)]

pub mod gen;

pub type C = (f64, f64);

pub const ZERO: C = (0.0, 0.0);

pub fn add(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

pub fn mul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn scale(a: C, s: f64) -> C {
    (a.0 * s, a.1 * s)
}

pub fn sq(a: C) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

pub fn polar(psi: f64, theta: f64) -> C {
    (psi * theta.cos(), psi * theta.sin())
}

pub fn popcount(m: usize) -> usize {
    m.count_ones() as usize
}

/// Dense QBPA over a frame of `n` singletons: index = subset mask.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub v: Vec<C>,
}

impl Dense {
    pub fn zero(n: usize) -> Self {
        Dense {
            n,
            v: vec![ZERO; 1 << n],
        }
    }

    pub fn full(&self) -> usize {
        (1 << self.n) - 1
    }
}

/// Reliability masses (Y, N, YN).
pub type Rel = (C, C, C);

/// The modification rule evaluated term by term over the whole power set.
pub fn modify(q1: &Dense, q2: Rel) -> Dense {
    let (y, no, yn) = q2;
    let n = q1.n;
    let full = q1.full();
    let mut out = Dense::zero(n);
    for i in 0..n {
        let x = 1usize << i;
        // Direct support plus an equal share of every composite holding x.
        let mut direct = q1.v[x];
        for a in 1..=full {
            if a & x != 0 && popcount(a) >= 2 {
                direct = add(direct, scale(q1.v[a], 1.0 / popcount(a) as f64));
            }
        }
        // Everything that excludes x.
        let mut non = ZERO;
        for a in 1..=full {
            if a & x == 0 {
                non = add(non, q1.v[a]);
            }
        }
        out.v[x] = add(mul(direct, y), mul(non, no));
    }
    if n >= 2 {
        for a in 1..full {
            let k = popcount(a);
            if k >= 2 {
                let kf = k as f64;
                out.v[a] = scale(mul(q1.v[a], y), (kf * kf - kf) / (kf * kf));
            }
        }
        let nf = n as f64;
        out.v[full] = add(scale(q1.v[full], (nf * nf - nf) / (nf * nf)), yn);
    }
    out
}

pub fn normalize(q: &Dense) -> Dense {
    let total: f64 = q.v.iter().map(|&a| sq(a)).sum();
    let f = 1.0 / total.sqrt();
    Dense {
        n: q.n,
        v: q.v.iter().map(|&a| scale(a, f)).collect(),
    }
}

/// Pairwise rule: enumerate all (B, C) pairs of subsets.
pub fn combine(q1: &Dense, q2: &Dense) -> (Dense, C) {
    let full = q1.full();
    let mut k = ZERO;
    let mut raw = Dense::zero(q1.n);
    for b in 1..=full {
        for c in 1..=full {
            let p = mul(q1.v[b], q2.v[c]);
            if b & c == 0 {
                k = add(k, p);
            } else {
                raw.v[b & c] = add(raw.v[b & c], p);
            }
        }
    }
    let denom = 1.0 - sq(k);
    let scaled = Dense {
        n: q1.n,
        v: raw.v.iter().map(|&a| scale(a, 1.0 / denom)).collect(),
    };
    (normalize(&scaled), k)
}

pub struct OracleRun {
    pub modified: Vec<Dense>,
    pub normalized: Vec<Dense>,
    pub combined: Dense,
}

pub fn run(evidence: &[(Dense, Rel)]) -> OracleRun {
    let modified: Vec<Dense> = evidence.iter().map(|(q1, q2)| modify(q1, *q2)).collect();
    let normalized: Vec<Dense> = modified.iter().map(normalize).collect();
    let mut combined = normalized[0].clone();
    for q in &normalized[1..] {
        combined = combine(&combined, q).0;
    }
    OracleRun {
        modified,
        normalized,
        combined,
    }
}

/// Classical Dempster rule on real masses.
pub fn classical_dempster(m1: &[f64], m2: &[f64]) -> Vec<f64> {
    let size = m1.len();
    let mut out = vec![0.0; size];
    let mut conflict = 0.0;
    for b in 1..size {
        for c in 1..size {
            let p = m1[b] * m2[c];
            if b & c == 0 {
                conflict += p;
            } else {
                out[b & c] += p;
            }
        }
    }
    out.iter().map(|m| m / (1.0 - conflict)).collect()
}
