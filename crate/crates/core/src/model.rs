//! Two-spin XY Hamiltonian in an inhomogeneous field and its equilibrium states.
//!
//! Basis ordering is `|00>, |01>, |10>, |11>` with `0` the spin-z `+1/2` state.
//! Subsystem A is spin 1 (first tensor factor), subsystem B is spin 2.
//! In this basis
//!
//! ```text
//! H = diag(omega, omega*delta, -omega*delta, -omega) + 1/2 (|01><10| + |10><01|)
//! ```
//!
//! so `|00>` and `|11>` are eigenvectors and the remaining 2x2 block couples
//! `|01>` and `|10>`.

use crate::error::{Error, Result};

/// Energy gap below which the two lowest levels are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;

/// Physical knobs of the model, in units of the coupling constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub delta: f64,
    pub tbar: Option<f64>,
}

impl ModelParams {
    /// Parameters for a ground-state query.
    pub fn new(omega: f64, delta: f64) -> Result<Self> {
        let p = Self {
            omega,
            delta,
            tbar: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a thermal query at dimensionless temperature `tbar`.
    pub fn thermal(omega: f64, delta: f64, tbar: f64) -> Result<Self> {
        let p = Self {
            omega,
            delta,
            tbar: Some(tbar),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega = {} must be >= 0",
                self.omega
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidParams(format!(
                "delta = {} must lie in [0, 1]",
                self.delta
            )));
        }
        if let Some(t) = self.tbar {
            if t.is_nan() || t < 0.0 || t.is_infinite() {
                return Err(Error::InvalidParams(format!(
                    "tbar = {t} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// The four Hamiltonian eigenvalues.
///
/// `lam1 = -omega` belongs to `|11>`, `lam2 = omega` to `|00>`, and
/// `lam3 <= lam4` are the levels of the central block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub lam1: f64,
    pub lam2: f64,
    pub lam3: f64,
    pub lam4: f64,
}

impl Spectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [self.lam1, self.lam2, self.lam3, self.lam4]
    }

    pub fn ground_energy(&self) -> f64 {
        self.lam1.min(self.lam3)
    }

    /// `lam1 - lam3`; the level crossing happens where this vanishes.
    pub fn crossing_gap(&self) -> f64 {
        self.lam1 - self.lam3
    }
}

/// Half-splitting of the central block, `sqrt(1 + 4 omega^2 delta^2) / 2`.
fn block_half_splitting(omega: f64, delta: f64) -> f64 {
    let od = omega * delta;
    0.5 * (1.0 + 4.0 * od * od).sqrt()
}

pub fn hamiltonian_spectrum(p: &ModelParams) -> Spectrum {
    let s = block_half_splitting(p.omega, p.delta);
    Spectrum {
        lam1: -p.omega,
        lam2: p.omega,
        lam3: -s,
        lam4: s,
    }
}

/// Dense Hamiltonian matrix in the computational basis.
pub fn hamiltonian_matrix(p: &ModelParams) -> [[f64; 4]; 4] {
    let od = p.omega * p.delta;
    let mut h = [[0.0; 4]; 4];
    h[0][0] = p.omega;
    h[1][1] = od;
    h[2][2] = -od;
    h[3][3] = -p.omega;
    h[1][2] = 0.5;
    h[2][1] = 0.5;
    h
}

/// Field scale at which `|11>` and the lower central-block level cross.
///
/// At `delta = 1` the lower block level stays below `-omega` for every
/// `omega`, so there is no crossing.
pub fn critical_omega(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParams(format!(
            "delta = {delta} must lie in [0, 1)"
        )));
    }
    if delta >= 1.0 {
        return Err(Error::CriticalPointDiverges);
    }
    Ok(0.5 / (1.0 - delta * delta).sqrt())
}

/// Real two-qubit X state with zero outer coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XDensityMatrix {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub r23: f64,
}

impl XDensityMatrix {
    pub fn new(r11: f64, r22: f64, r33: f64, r44: f64, r23: f64) -> Result<Self> {
        let rho = Self {
            r11,
            r22,
            r33,
            r44,
            r23,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            r11: 0.25,
            r22: 0.25,
            r33: 0.25,
            r44: 0.25,
            r23: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [self.r11, self.r22, self.r33, self.r44, self.r23];
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite entry in {self:?}")));
        }
        if [self.r11, self.r22, self.r33, self.r44]
            .iter()
            .any(|&x| x < 0.0)
        {
            return Err(Error::InvalidState(format!(
                "negative population in {self:?}"
            )));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace = {trace}")));
        }
        if self.r22 * self.r33 - self.r23 * self.r23 < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "central block not positive semidefinite: r22*r33 = {}, r23^2 = {}",
                self.r22 * self.r33,
                self.r23 * self.r23
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.r11 + self.r22 + self.r33 + self.r44
    }

    /// The same state with the two spins exchanged (`r22 <-> r33`).
    pub fn swap_subsystems(&self) -> Self {
        Self {
            r22: self.r33,
            r33: self.r22,
            ..*self
        }
    }

    pub fn to_dense(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = self.r11;
        m[1][1] = self.r22;
        m[2][2] = self.r33;
        m[3][3] = self.r44;
        m[1][2] = self.r23;
        m[2][1] = self.r23;
        m
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            r11: self.r11 * k,
            r22: self.r22 * k,
            r33: self.r33 * k,
            r44: self.r44 * k,
            r23: self.r23 * k,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            r11: self.r11 + other.r11,
            r22: self.r22 + other.r22,
            r33: self.r33 + other.r33,
            r44: self.r44 + other.r44,
            r23: self.r23 + other.r23,
        }
    }
}

/// Thermal state `exp(-H/tbar) / Z`.
///
/// The spectrum is shifted by its minimum before exponentiating, so the
/// largest Boltzmann weight is exactly 1 and `Z >= 1` for every `tbar > 0`.
pub fn gibbs_state(p: &ModelParams) -> Result<XDensityMatrix> {
    p.validate()?;
    let tbar = match p.tbar {
        Some(t) if t > 0.0 => t,
        other => return Err(Error::ZeroTemperature(other.unwrap_or(0.0))),
    };
    let spec = hamiltonian_spectrum(p);
    let e0 = spec.ground_energy();
    let weight = |e: f64| (-(e - e0) / tbar).exp();

    let w00 = weight(spec.lam2);
    let w11 = weight(spec.lam1);
    let w_lo = weight(spec.lam3);
    let w_hi = weight(spec.lam4);

    // exp(-B/tbar) = a I + b B for the 2x2 block B with eigenvalues +-s.
    let s = spec.lam4;
    let a = 0.5 * (w_lo + w_hi);
    let b = (w_hi - w_lo) / (2.0 * s);
    let od = p.omega * p.delta;

    let z = w00 + w11 + w_lo + w_hi;
    Ok(XDensityMatrix {
        r11: w00 / z,
        r22: (a + b * od) / z,
        r33: (a - b * od) / z,
        r44: w11 / z,
        r23: 0.5 * b / z,
    })
}

/// Projector onto the lower central-block eigenvector.
fn lower_block_projector(omega: f64, delta: f64) -> XDensityMatrix {
    // (B + s) v = 0 with B = [[h, 1/2], [1/2, -h]] gives v ~ (1/2, -(h + s)).
    let h = omega * delta;
    let s = block_half_splitting(omega, delta);
    let v1 = 0.5;
    let v2 = -(h + s);
    let norm2 = v1 * v1 + v2 * v2;
    XDensityMatrix {
        r11: 0.0,
        r22: v1 * v1 / norm2,
        r33: v2 * v2 / norm2,
        r44: 0.0,
        r23: v1 * v2 / norm2,
    }
}

const DOWN_DOWN: XDensityMatrix = XDensityMatrix {
    r11: 0.0,
    r22: 0.0,
    r33: 0.0,
    r44: 1.0,
    r23: 0.0,
};

/// Zero-temperature state.
///
/// Away from the level crossing this is the pure ground projector. When
/// `|lam1 - lam3| <= DEGENERACY_TOL` it is the equal mixture of the two
/// ground projectors, which is the `tbar -> 0` limit of [`gibbs_state`].
pub fn ground_state(p: &ModelParams) -> Result<XDensityMatrix> {
    p.validate()?;
    if let Some(t) = p.tbar {
        if t != 0.0 {
            return Err(Error::InvalidParams(format!(
                "ground_state requires tbar absent or zero, got {t}"
            )));
        }
    }
    let spec = hamiltonian_spectrum(p);
    let gap = spec.crossing_gap();
    let block = lower_block_projector(p.omega, p.delta);
    let rho = if gap.abs() <= DEGENERACY_TOL {
        block.add(&DOWN_DOWN).scaled(0.5)
    } else if gap > 0.0 {
        block
    } else {
        DOWN_DOWN
    };
    Ok(rho)
}

/// True when the ground level is doubly degenerate at these parameters.
pub fn is_degenerate(p: &ModelParams) -> bool {
    hamiltonian_spectrum(p).crossing_gap().abs() <= DEGENERACY_TOL
}
