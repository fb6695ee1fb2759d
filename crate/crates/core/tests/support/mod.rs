//! Independent reference implementations for the integration tests: dense
//! matrices built by Kronecker expansion, closed-form train-MDP values,
//! numerical quadrature of the Rician density and central differences.
#![allow(dead_code)]

use qdefense_core::qsim::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn rx(t: f64) -> Matrix {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    vec![vec![c(co, 0.0), c(0.0, -si)], vec![c(0.0, -si), c(co, 0.0)]]
}

pub fn ry(t: f64) -> Matrix {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    vec![vec![c(co, 0.0), c(-si, 0.0)], vec![c(si, 0.0), c(co, 0.0)]]
}

pub fn rz(t: f64) -> Matrix {
    vec![
        vec![Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
    ]
}

pub fn hadamard() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]
}

/// `I ⊗ … ⊗ G ⊗ … ⊗ I` with qubit 0 as the rightmost (least significant) factor.
pub fn expand_single(gate: &Matrix, qubit: usize, num_qubits: usize) -> Matrix {
    let mut out = identity(1);
    for q in (0..num_qubits).rev() {
        let factor = if q == qubit { gate.clone() } else { identity(2) };
        out = kron(&out, &factor);
    }
    out
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ X` on the control/target pair, expanded to the register.
pub fn expand_cnot(control: usize, target: usize, num_qubits: usize) -> Matrix {
    let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
    let build = |ctrl: &Matrix, tgt: &Matrix| {
        let mut out = identity(1);
        for q in (0..num_qubits).rev() {
            let factor = if q == control {
                ctrl.clone()
            } else if q == target {
                tgt.clone()
            } else {
                identity(2)
            };
            out = kron(&out, &factor);
        }
        out
    };
    let a = build(&p0, &identity(2));
    let b = build(&p1, &x);
    a.iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(u, v)| u + v).collect())
        .collect()
}

/// Full unitary of one variational layer: Rot on every qubit, then the
/// ascending CNOT ring.
pub fn layer_unitary(rows: &[[f64; 3]], entangling: bool) -> Matrix {
    let m = rows.len();
    let mut u = identity(1 << m);
    for (q, r) in rows.iter().enumerate() {
        let rot = matmul(&rz(r[2]), &matmul(&ry(r[1]), &rx(r[0])));
        u = matmul(&expand_single(&rot, q, m), &u);
    }
    if entangling && m > 1 {
        for i in 0..m {
            u = matmul(&expand_cnot(i, (i + 1) % m, m), &u);
        }
    }
    u
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Closed-form optimum of the train MDP: the decision state either loops
/// forever on one action or leaves, so `V = max(4(1−p)/(1−pγ), 2(1−q)/(1−qγ))`.
pub struct TrainOracle {
    pub v0: f64,
    pub q0: f64,
    pub q1: f64,
}

pub fn train_oracle(p: f64, q: f64, gamma: f64) -> TrainOracle {
    let stay = |keep: f64, reward: f64| {
        if keep * gamma >= 1.0 {
            0.0
        } else {
            reward * (1.0 - keep) / (1.0 - keep * gamma)
        }
    };
    let v0 = stay(p, 4.0).max(stay(q, 2.0));
    TrainOracle {
        v0,
        q0: p * gamma * v0 + 4.0 * (1.0 - p),
        q1: q * gamma * v0 + 2.0 * (1.0 - q),
    }
}

// ln I₀(z) from the power series Σ (z/2)^{2k} / (k!)², summed in log space.
fn ln_bessel_i0(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let ln_half = (z / 2.0).ln();
    let mut terms = Vec::new();
    let (mut lt, mut top) = (0.0, 0.0_f64);
    let mut k = 0.0_f64;
    loop {
        terms.push(lt);
        top = top.max(lt);
        k += 1.0;
        lt += 2.0 * ln_half - 2.0 * k.ln();
        if k > z && lt < top - 50.0 {
            break;
        }
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

pub fn rician_pdf(x: f64, nu: f64, sigma: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s2 = sigma * sigma;
    (x.ln() - s2.ln() - (x * x + nu * nu) / (2.0 * s2) + ln_bessel_i0(x * nu / s2)).exp()
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = (a + b) / 2.0;
        let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    // split first so narrow peaks are not skipped by the coarse estimate
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (flo, fhi, fmid) = (f(lo), f(hi), f((lo + hi) / 2.0));
            recurse(
                f,
                lo,
                hi,
                flo,
                fmid,
                fhi,
                simpson(flo, fmid, fhi, lo, hi),
                eps / pieces as f64,
                40,
            )
        })
        .sum()
}

pub fn rician_cdf_quadrature(x: f64, nu: f64, sigma: f64) -> f64 {
    adaptive_simpson(&|t| rician_pdf(t, nu, sigma), 0.0, x, 1e-12)
}

/// Central difference `(f(x + h) − f(x − h)) / 2h` along every coordinate.
pub fn central_difference(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let plus = f(&probe);
            probe[i] = x[i] - h;
            let minus = f(&probe);
            probe[i] = x[i];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}
