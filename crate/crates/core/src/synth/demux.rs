//! Constant demultiplexing of a one-control multiplexor.
//!
//! Given `V0, V1 ∈ U(2)` find `L, W` and a diagonal `r` with
//! `V0 = r† W d L` and `V1 = r W d† L`, `d = diag(e^{iπ/4}, e^{−iπ/4})`.

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{dagger, dist2, matmul2, unitarity_residual, Mat2, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemuxStep {
    pub l: Mat2,
    pub w: Mat2,
    /// Phases of `r = diag(e^{iρ0}, e^{iρ1})`.
    pub r_phases: [f64; 2],
}

fn diag2(p0: C64, p1: C64) -> Mat2 {
    let o = C64::new(0.0, 0.0);
    [[p0, o], [o, p1]]
}

/// `diag(e^{iπ/4}, e^{−iπ/4})`.
pub fn d_matrix() -> Mat2 {
    let q = std::f64::consts::FRAC_PI_4;
    diag2(C64::from_polar(1.0, q), C64::from_polar(1.0, -q))
}

impl DemuxStep {
    pub fn r(&self) -> Mat2 {
        diag2(
            C64::from_polar(1.0, self.r_phases[0]),
            C64::from_polar(1.0, self.r_phases[1]),
        )
    }

    /// `(r† W d L, r W d† L)`.
    pub fn reconstruct(&self) -> (Mat2, Mat2) {
        let d = d_matrix();
        let r = self.r();
        let v0 = matmul2(&dagger(&r), &matmul2(&self.w, &matmul2(&d, &self.l)));
        let v1 = matmul2(&r, &matmul2(&self.w, &matmul2(&dagger(&d), &self.l)));
        (v0, v1)
    }

    /// Largest entry error of [`DemuxStep::reconstruct`] against `(v0, v1)`.
    pub fn residual(&self, v0: &Mat2, v1: &Mat2) -> f64 {
        let (a, b) = self.reconstruct();
        dist2(&a, v0).max(dist2(&b, v1))
    }
}

/// Scales `v` so its largest-magnitude component is real and positive.
fn fix_phase(v: [C64; 2]) -> [C64; 2] {
    let big = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let s = big.conj() / (big.norm() * norm);
    [v[0] * s, v[1] * s]
}

pub fn demultiplex_pair(v0: &Mat2, v1: &Mat2) -> Result<DemuxStep> {
    for v in [v0, v1] {
        let res = unitarity_residual(v);
        if res > UNITARY_TOL {
            return Err(Error::NonUnitary(res));
        }
    }
    // A = V0 V1† = e^{iθ/2} [[x0, x1], [−x̄1, x̄0]]
    let a = matmul2(v0, &dagger(v1));
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let theta = det.arg();
    let x0 = a[0][0] * C64::from_polar(1.0, -theta / 2.0);
    let arg_x0 = if x0.norm() < 1e-14 { 0.0 } else { x0.arg() };
    let rho0 = (-arg_x0 - theta / 2.0 - FRAC_PI_2) / 2.0;
    let rho1 = (arg_x0 - theta / 2.0 + FRAC_PI_2) / 2.0;
    let r = diag2(C64::from_polar(1.0, rho0), C64::from_polar(1.0, rho1));
    // M = rAr has eigenvalues ±i exactly; (m01, i(1+|x0|)) spans the +i eigenspace.
    let m = matmul2(&r, &matmul2(&a, &r));
    let plus = fix_phase([m[0][1], C64::new(0.0, 1.0 + x0.norm())]);
    let minus = fix_phase([-plus[1].conj(), plus[0].conj()]);
    let w = [[plus[0], minus[0]], [plus[1], minus[1]]];
    let l = matmul2(
        &dagger(&d_matrix()),
        &matmul2(&dagger(&w), &matmul2(&r, v0)),
    );
    Ok(DemuxStep {
        l,
        w,
        r_phases: [rho0, rho1],
    })
}
