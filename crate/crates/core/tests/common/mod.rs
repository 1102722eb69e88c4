#![allow(dead_code)]

use std::f64::consts::PI;

use iontrap::sim::{build_raman_hamiltonian, RegisterLayout};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Damped Rabi oscillation on resonance for H = (Ω/2)σx with population
/// decay rate γ, starting in the ground state (Torrey's strong-drive form).
pub fn torrey_excited(omega: f64, gamma: f64, t: f64) -> f64 {
    let lambda = (omega * omega - gamma * gamma / 16.0).sqrt();
    let a = 0.75 * gamma;
    omega * omega / (2.0 * omega * omega + gamma * gamma)
        * (1.0 - (-a * t).exp() * ((lambda * t).cos() + a / lambda * (lambda * t).sin()))
}

/// One-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Critical value of the KS statistic at the 1% level for large n.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Exact evolution of a single-ion Raman Λ-system from |0, n = 0⟩ by
/// diagonalising the (real symmetric) Hamiltonian.
pub struct RamanSystem {
    pub layout: RegisterLayout,
    pub rabi02: f64,
    pub g12: f64,
    pub delta2: f64,
    vectors: DMatrix<f64>,
    values: DVector<f64>,
    start: DVector<f64>,
}

pub const RAMAN_ETA: f64 = 0.1;
pub const RAMAN_COM_IONS: usize = 5;

impl RamanSystem {
    /// Ω₀₂ = `ratio`·Δ₂ with Δ₂ = 1. When `balanced`, Ω₁₂ is chosen so that
    /// ηΩ₁₂/√N = Ω₀₂; otherwise Ω₁₂ = 0.
    pub fn new(ratio: f64, balanced: bool) -> Self {
        let layout = RegisterLayout::new(1, 3)
            .unwrap()
            .with_com_effective_ions(RAMAN_COM_IONS)
            .unwrap();
        let delta2 = 1.0;
        let rabi02 = ratio * delta2;
        let rabi12 = if balanced {
            rabi02 * (RAMAN_COM_IONS as f64).sqrt() / RAMAN_ETA
        } else {
            0.0
        };
        let h = build_raman_hamiltonian(&layout, 0, rabi02, rabi12, delta2, RAMAN_ETA).unwrap();
        assert!(h.hermitian_defect() < 1e-15);
        let dense = h.to_dense().map(|c| c.re);
        let eig = SymmetricEigen::new(dense);
        let mut start = DVector::zeros(layout.dim());
        start[layout.index(&[0], 0)] = 1.0;
        RamanSystem {
            layout,
            rabi02,
            g12: layout.coupling(RAMAN_ETA) * rabi12,
            delta2,
            vectors: eig.eigenvectors,
            values: eig.eigenvalues,
            start,
        }
    }

    /// Populations of levels 0, 1 and 2 at time t.
    pub fn populations(&self, t: f64) -> [f64; 3] {
        let coeffs = self.vectors.transpose() * &self.start;
        let n = self.layout.dim();
        let mut pops = [0.0; 3];
        for i in 0..n {
            let mut amp = Complex64::new(0.0, 0.0);
            for k in 0..n {
                amp += Complex64::from_polar(self.vectors[(i, k)] * coeffs[k], -self.values[k] * t);
            }
            pops[self.layout.level(i, 0) as usize] += amp.norm_sqr();
        }
        pops
    }

    /// Closed forms: level 0 from the adiabatically eliminated two-level
    /// problem, level 1 as its complement, level 2 as Ω₀₂²/2Δ₂²·(1 − cos Δ₂t).
    pub fn closed_form(&self, t: f64) -> [f64; 3] {
        let a2 = self.rabi02 * self.rabi02;
        let b2 = self.g12 * self.g12;
        let lambda = (a2 + b2) / (4.0 * self.delta2);
        let p0 = ((Complex64::from_polar(a2, -lambda * t) + b2) / (a2 + b2)).norm_sqr();
        let p2 = a2 / (2.0 * self.delta2 * self.delta2) * (1.0 - (self.delta2 * t).cos());
        [p0, 1.0 - p0, p2]
    }

    /// The level-2 form as printed, with 1 + cos.
    pub fn printed_level_two(&self, t: f64) -> f64 {
        self.rabi02 * self.rabi02 / (2.0 * self.delta2 * self.delta2) * (1.0 + (self.delta2 * t).cos())
    }

    /// Ω₀₂²/2Δ₂.
    pub fn omega_eff(&self) -> f64 {
        self.rabi02 * self.rabi02 / (2.0 * self.delta2)
    }

    /// Largest |numeric − closed form| over all three levels on `samples`
    /// points of [0, t_end].
    pub fn max_deviation(&self, t_end: f64, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| {
                let t = t_end * i as f64 / samples as f64;
                let num = self.populations(t);
                let cf = self.closed_form(t);
                (0..3).map(|l| (num[l] - cf[l]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Time of the first minimum of the level-0 population, searched around
    /// half a period of the expected effective oscillation.
    pub fn first_transfer_time(&self) -> (f64, f64) {
        let guess = PI / self.omega_eff();
        let (lo, hi) = (0.5 * guess, 1.5 * guess);
        let n = 4000;
        let p0 = |t: f64| self.populations(t)[0];
        let (mut best_t, mut best) = (lo, f64::INFINITY);
        for i in 0..=n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let p = p0(t);
            if p < best {
                best = p;
                best_t = t;
            }
        }
        let step = (hi - lo) / n as f64;
        let (mut a, mut b) = (best_t - step, best_t + step);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if p0(c) < p0(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let t = 0.5 * (a + b);
        (t, p0(t).min(best))
    }
}
