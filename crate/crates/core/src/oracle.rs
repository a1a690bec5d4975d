//! Brute-force validators that share no code path with the X-state formulas.
//!
//! Everything here works on the dense 4x4 representation: measurements are
//! explicit rank-1 projectors over the full Bloch sphere, entropies come from
//! 2x2 Hermitian eigenvalues or a Jacobi eigensolver, and the matrix
//! exponential is rebuilt from the dense eigensystem.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use std::f64::consts::PI;

use crate::discord::shannon_entropy;
use crate::error::{Error, Result};
use crate::model::{gibbs_state, ModelParams, XDensityMatrix};
use crate::par::{map_indexed, Execution};

type C2 = [[Complex64; 2]; 2];
type C4 = [[Complex64; 4]; 4];
pub type Real4 = [[f64; 4]; 4];

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-14;
const EXPM_RADIUS_MAX: f64 = 50.0;

/// Smallest grid accepted by [`brute_force_classical_correlation`].
pub const MIN_GRID: usize = 16;
/// Grid used by [`brute_force_discord`].
pub const DEFAULT_GRID: usize = 128;
const REFINE_ROUNDS: usize = 6;
const REFINE_HALF_POINTS: usize = 10;
const REFINE_CANDIDATES: usize = 4;

/// Which qubit is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Bloch-sphere axis of a projective qubit measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParams(format!(
                "measurement angles out of range: theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Projectors `(1 +- n.sigma) / 2` for the two outcomes.
    fn projectors(&self) -> [C2; 2] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let (nx, ny, nz) = (st * cp, st * sp, ct);
        let re = |x: f64| Complex64::new(x, 0.0);
        [1.0, -1.0].map(|s| {
            [
                [
                    re(0.5 * (1.0 + s * nz)),
                    Complex64::new(0.5 * s * nx, -0.5 * s * ny),
                ],
                [
                    Complex64::new(0.5 * s * nx, 0.5 * s * ny),
                    re(0.5 * (1.0 - s * nz)),
                ],
            ]
        })
    }
}

fn complexify(m: &Real4) -> C4 {
    m.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

/// Von Neumann entropy of a 2x2 Hermitian matrix with unit trace.
fn entropy2(m: &C2) -> f64 {
    let tr = m[0][0].re + m[1][1].re;
    let det = m[0][0].re * m[1][1].re - m[0][1].norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    shannon_entropy(&[0.5 * (tr + disc), 0.5 * (tr - disc)])
}

/// Unnormalized state of the unmeasured qubit after outcome `proj`:
/// `Tr_measured[rho (proj on measured)]`. Index `2a + b` is `|a>_A |b>_B`.
fn conditioned(rho: &C4, subsystem: Subsystem, proj: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    let (row, col) = match subsystem {
                        Subsystem::B => (2 * i + k, 2 * j + l),
                        Subsystem::A => (2 * k + i, 2 * l + j),
                    };
                    acc += rho[row][col] * proj[l][k];
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

fn partial_trace(rho: &C4, traced: Subsystem) -> C2 {
    let identity = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    conditioned(rho, traced, &identity)
}

fn conditional_entropy_dense(rho: &C4, subsystem: Subsystem, basis: &MeasurementBasis) -> f64 {
    let mut total = 0.0;
    for proj in basis.projectors() {
        let state = conditioned(rho, subsystem, &proj);
        let p = state[0][0].re + state[1][1].re;
        if p <= 1e-300 {
            continue;
        }
        let normalized = state.map(|row| row.map(|z| z / p));
        total += p * entropy2(&normalized);
    }
    total
}

/// Post-measurement conditional entropy `sum_i p_i S(rho_other | i)`.
pub fn conditional_entropy(
    rho: &XDensityMatrix,
    subsystem: Subsystem,
    basis: &MeasurementBasis,
) -> f64 {
    conditional_entropy_dense(&complexify(&rho.to_dense()), subsystem, basis)
}

#[derive(Debug, Clone, Copy)]
struct Probe {
    theta: f64,
    phi: f64,
    value: f64,
}

fn probe(rho: &C4, subsystem: Subsystem, theta: f64, phi: f64) -> Probe {
    let theta = theta.clamp(0.0, PI);
    let basis = MeasurementBasis { theta, phi };
    Probe {
        theta,
        phi,
        value: conditional_entropy_dense(rho, subsystem, &basis),
    }
}

/// Minimum conditional entropy over all measurement axes of `subsystem`.
///
/// A `grid_n x grid_n` scan in `(theta, phi)` is followed by shrinking local
/// grids (factor 10 per round) around the best few grid points.
pub fn minimize_conditional_entropy(
    rho: &XDensityMatrix,
    subsystem: Subsystem,
    grid_n: usize,
    exec: Execution,
) -> Result<(MeasurementBasis, f64)> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidParams(format!(
            "grid_n = {grid_n} must be >= {MIN_GRID}"
        )));
    }
    rho.validate()?;
    let dense = complexify(&rho.to_dense());
    let d_theta = PI / (grid_n - 1) as f64;
    let d_phi = 2.0 * PI / grid_n as f64;

    let rows = map_indexed(exec, grid_n, |i| {
        (0..grid_n)
            .map(|j| probe(&dense, subsystem, i as f64 * d_theta, j as f64 * d_phi))
            .collect::<Vec<_>>()
    });
    let mut coarse: Vec<Probe> = rows.into_iter().flatten().collect();
    // stable sort keeps grid order among equal values
    coarse.sort_by(|a, b| a.value.total_cmp(&b.value));

    let refined = map_indexed(exec, REFINE_CANDIDATES.min(coarse.len()), |c| {
        let mut best = coarse[c];
        let (mut h_theta, mut h_phi) = (d_theta, d_phi);
        for _ in 0..REFINE_ROUNDS {
            let (center_theta, center_phi) = (best.theta, best.phi);
            let n = REFINE_HALF_POINTS as isize;
            for a in -n..=n {
                for b in -n..=n {
                    let t = center_theta + h_theta * a as f64 / n as f64;
                    let f = center_phi + h_phi * b as f64 / n as f64;
                    let p = probe(&dense, subsystem, t, f);
                    if p.value < best.value {
                        best = p;
                    }
                }
            }
            h_theta /= 10.0;
            h_phi /= 10.0;
        }
        best
    });
    let best = refined
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one candidate");
    let basis = MeasurementBasis {
        theta: best.theta,
        phi: best.phi.rem_euclid(2.0 * PI),
    };
    Ok((basis, best.value))
}

/// Entropy of the marginal of the qubit that is *not* measured.
fn unmeasured_marginal_entropy(dense: &C4, subsystem: Subsystem) -> f64 {
    entropy2(&partial_trace(dense, subsystem))
}

/// Classical correlation by direct minimization over projective measurements.
pub fn brute_force_classical_correlation(
    rho: &XDensityMatrix,
    subsystem: Subsystem,
    grid_n: usize,
) -> Result<f64> {
    brute_force_classical_correlation_with(rho, subsystem, grid_n, Execution::default())
}

pub fn brute_force_classical_correlation_with(
    rho: &XDensityMatrix,
    subsystem: Subsystem,
    grid_n: usize,
    exec: Execution,
) -> Result<f64> {
    let (_, min) = minimize_conditional_entropy(rho, subsystem, grid_n, exec)?;
    let dense = complexify(&rho.to_dense());
    Ok(unmeasured_marginal_entropy(&dense, subsystem) - min)
}

/// Mutual information from the dense eigensolver and explicit partial traces.
pub fn dense_mutual_information(rho: &XDensityMatrix) -> Result<f64> {
    let eig = dense_eig4(&rho.to_dense())?;
    let dense = complexify(&rho.to_dense());
    let s_a = entropy2(&partial_trace(&dense, Subsystem::B));
    let s_b = entropy2(&partial_trace(&dense, Subsystem::A));
    let probs = eig.values.map(|x| x.max(0.0));
    Ok(s_a + s_b - shannon_entropy(&probs))
}

/// Discord by brute-force measurement search on `subsystem`.
pub fn brute_force_discord(rho: &XDensityMatrix, subsystem: Subsystem) -> Result<f64> {
    Ok(dense_mutual_information(rho)?
        - brute_force_classical_correlation(rho, subsystem, DEFAULT_GRID)?)
}

/// Eigen-decomposition of a real symmetric 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen4 {
    /// Ascending.
    pub values: [f64; 4],
    /// Column `k` (`vectors[i][k]`) is the eigenvector for `values[k]`.
    pub vectors: Real4,
}

impl Eigen4 {
    /// `V f(D) V^T`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Real4 {
        let fv = self.values.map(f);
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4)
                    .map(|k| self.vectors[i][k] * fv[k] * self.vectors[j][k])
                    .sum();
            }
        }
        out
    }
}

fn max_asymmetry(m: &Real4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

fn off_diagonal_norm(m: &Real4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += m[i][j] * m[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver.
pub fn dense_eig4(matrix: &Real4) -> Result<Eigen4> {
    let asym = max_asymmetry(matrix);
    if asym > SYMMETRY_TOL {
        return Err(Error::NonSymmetric(asym));
    }
    let mut a = *matrix;
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);

    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.map(|k| a[k][k]);
    let mut vectors = [[0.0; 4]; 4];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..4 {
            vectors[i][col] = v[i][k];
        }
    }
    Ok(Eigen4 { values, vectors })
}

/// Matrix exponential of a real symmetric matrix via its eigensystem.
pub fn dense_expm4(matrix: &Real4) -> Result<Real4> {
    let eig = dense_eig4(matrix)?;
    let radius = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if radius > EXPM_RADIUS_MAX {
        return Err(Error::SpectralRadius(radius));
    }
    Ok(eig.reconstruct_with(f64::exp))
}

fn kron(a: &C2, b: &C2) -> C4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Hamiltonian assembled from Kronecker products of spin-1/2 operators.
///
/// Returns the real part; the imaginary part is asserted to vanish.
pub fn spin_hamiltonian(omega: f64, delta: f64) -> Real4 {
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let sx: C2 = [[z, r(0.5)], [r(0.5), z]];
    let sy: C2 = [
        [z, Complex64::new(0.0, -0.5)],
        [Complex64::new(0.0, 0.5), z],
    ];
    let sz: C2 = [[r(0.5), z], [z, r(-0.5)]];
    let id: C2 = [[r(1.0), z], [z, r(1.0)]];

    let terms = [
        (1.0, kron(&sx, &sx)),
        (1.0, kron(&sy, &sy)),
        (omega * (1.0 + delta), kron(&sz, &id)),
        (omega * (1.0 - delta), kron(&id, &sz)),
    ];
    let mut h = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let v: Complex64 = terms.iter().map(|(c, m)| m[i][j] * *c).sum();
            assert!(v.im.abs() < 1e-15, "Hamiltonian entry ({i},{j}) not real");
            h[i][j] = v.re;
        }
    }
    h
}

/// Draws a valid X state: Dirichlet(1,1,1,1) populations and a coherence
/// uniform in `[-sqrt(r22 r33), sqrt(r22 r33)]`.
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> XDensityMatrix {
    let w: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let total: f64 = w.iter().sum();
    let [r11, r22, r33, r44] = w.map(|x| x / total);
    let bound = (r22 * r33).sqrt();
    let r23 = rng.random_range(-1.0..=1.0) * bound;
    XDensityMatrix {
        r11,
        r22,
        r33,
        r44,
        r23,
    }
}

/// Draws a thermal state with `omega in [0, 2]`, `delta in [0, 1]` and
/// `log10(tbar)` uniform in `[-2, 1]`.
pub fn random_gibbs_state<R: Rng + ?Sized>(rng: &mut R) -> Result<XDensityMatrix> {
    let omega = rng.random_range(0.0..=2.0);
    let delta = rng.random_range(0.0..=1.0);
    let tbar = 10f64.powf(rng.random_range(-2.0..=1.0));
    gibbs_state(&ModelParams::thermal(omega, delta, tbar)?)
}
