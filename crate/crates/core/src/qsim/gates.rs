use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

/// Row-major single-qubit unitary.
pub type Matrix2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn half_angle(angle: f64) -> (f64, f64) {
    (libm::cos(angle / 2.0), libm::sin(angle / 2.0))
}

pub fn rx(angle: f64) -> Matrix2 {
    let (co, si) = half_angle(angle);
    [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]]
}

pub fn ry(angle: f64) -> Matrix2 {
    let (co, si) = half_angle(angle);
    [[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]]
}

pub fn rz(angle: f64) -> Matrix2 {
    let (co, si) = half_angle(angle);
    [[c(co, -si), c(0.0, 0.0)], [c(0.0, 0.0), c(co, si)]]
}

pub fn hadamard() -> Matrix2 {
    let h = FRAC_1_SQRT_2;
    [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
}

/// `RZ(z) · RY(y) · RX(x)`: the x rotation acts first.
pub fn rot(x: f64, y: f64, z: f64) -> Matrix2 {
    mul(&rz(z), &mul(&ry(y), &rx(x)))
}

pub(crate) fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
