//! Local joint Pauli priors and their marginal and four-state views.
//!
//! A joint table is stored as `[f64; 4]` indexed by [`joint_index`], i.e. in
//! the order (0,0), (1,0), (0,1), (1,1) for (x, z).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::PauliError;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a table.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Position of `(x, z)` in a joint table.
#[inline]
pub fn joint_index(x: u8, z: u8) -> usize {
    (x as usize & 1) | ((z as usize & 1) << 1)
}

/// The four Pauli labels `0, 1, ω, ω²` of F4, with ω² = ω + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Label {
    Zero = 0,
    One = 1,
    Omega = 2,
    OmegaSq = 3,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Zero, Label::One, Label::Omega, Label::OmegaSq];

    /// Coefficient of 1 when the label is written as `x + ω z`.
    pub fn x(self) -> u8 {
        match self {
            Label::Zero | Label::Omega => 0,
            Label::One | Label::OmegaSq => 1,
        }
    }

    /// Coefficient of ω when the label is written as `x + ω z`.
    pub fn z(self) -> u8 {
        match self {
            Label::Zero | Label::One => 0,
            Label::Omega | Label::OmegaSq => 1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Label {
        Label::ALL[k]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::Zero => "0",
            Label::One => "1",
            Label::Omega => "w",
            Label::OmegaSq => "w2",
        }
    }
}

/// The labeling φ(x, z) = x + ωz.
pub fn phi(x: u8, z: u8) -> Label {
    match (x & 1, z & 1) {
        (0, 0) => Label::Zero,
        (1, 0) => Label::One,
        (0, 1) => Label::Omega,
        _ => Label::OmegaSq,
    }
}

/// Per-qubit joint prior tables Q_j(x, z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 4]>", into = "Vec<[f64; 4]>")]
pub struct PauliPrior {
    tables: Vec<[f64; 4]>,
}

impl TryFrom<Vec<[f64; 4]>> for PauliPrior {
    type Error = Error;
    fn try_from(tables: Vec<[f64; 4]>) -> Result<Self> {
        PauliPrior::new(tables)
    }
}

impl From<PauliPrior> for Vec<[f64; 4]> {
    fn from(p: PauliPrior) -> Self {
        p.tables
    }
}

fn check_table(qubit: usize, t: &[f64; 4]) -> Result<()> {
    if let Some(v) = t.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidPrior {
            qubit,
            msg: format!("entry {v} is not a nonnegative number"),
        });
    }
    let sum: f64 = t.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidPrior {
            qubit,
            msg: format!("entries sum to {sum}"),
        });
    }
    Ok(())
}

impl PauliPrior {
    /// Tables in (x, z) order (0,0), (1,0), (0,1), (1,1).
    pub fn new(tables: Vec<[f64; 4]>) -> Result<Self> {
        for (j, t) in tables.iter().enumerate() {
            check_table(j, t)?;
        }
        Ok(PauliPrior { tables })
    }

    /// Same table at every qubit.
    pub fn uniform_over(n: usize, table: [f64; 4]) -> Result<Self> {
        Self::new(vec![table; n])
    }

    /// Depolarizing channel: Q(0,0) = 1 - p, every other entry p/3.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let q = p / 3.0;
        Self::uniform_over(n, [1.0 - p, q, q, q])
    }

    /// Only Y errors: Q(0,0) = 1 - p, Q(1,1) = p.
    pub fn y_only(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Self::uniform_over(n, [1.0 - p, 0.0, 0.0, p])
    }

    /// Product prior Q_j(x, z) = a_j(x) b_j(z).
    pub fn product(x_marginals: &[[f64; 2]], z_marginals: &[[f64; 2]]) -> Result<Self> {
        if x_marginals.len() != z_marginals.len() {
            return Err(Error::DimensionMismatch(
                "marginal lists differ in length".into(),
            ));
        }
        Self::new(
            x_marginals
                .iter()
                .zip(z_marginals)
                .map(|(a, b)| [a[0] * b[0], a[1] * b[0], a[0] * b[1], a[1] * b[1]])
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, j: usize) -> &[f64; 4] {
        &self.tables[j]
    }

    pub fn tables(&self) -> &[[f64; 4]] {
        &self.tables
    }

    #[inline]
    pub fn q(&self, j: usize, x: u8, z: u8) -> f64 {
        self.tables[j][joint_index(x, z)]
    }

    /// `(QX, QZ)` with QX_j(x) = Σ_z Q_j(x,z) and QZ_j(z) = Σ_x Q_j(x,z).
    pub fn marginals(&self) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
        self.tables
            .iter()
            .map(|t| {
                (
                    [t[0] + t[2], t[1] + t[3]],
                    [t[0] + t[1], t[2] + t[3]],
                )
            })
            .unzip()
    }

    pub fn relabel(&self) -> FourStatePrior {
        FourStatePrior {
            tables: self
                .tables
                .iter()
                .map(|t| {
                    let mut v = [0.0; 4];
                    for x in 0..2 {
                        for z in 0..2 {
                            v[phi(x, z).index()] = t[joint_index(x, z)];
                        }
                    }
                    v
                })
                .collect(),
        }
    }
}

/// Per-qubit prior over the labels, indexed by [`Label::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourStatePrior {
    tables: Vec<[f64; 4]>,
}

impl FourStatePrior {
    pub fn new(tables: Vec<[f64; 4]>) -> Result<Self> {
        for (j, t) in tables.iter().enumerate() {
            check_table(j, t)?;
        }
        Ok(FourStatePrior { tables })
    }

    pub fn n(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, j: usize) -> &[f64; 4] {
        &self.tables[j]
    }

    #[inline]
    pub fn q(&self, j: usize, a: Label) -> f64 {
        self.tables[j][a.index()]
    }

    /// Inverse relabeling back to joint (x, z) tables.
    pub fn to_joint(&self) -> PauliPrior {
        PauliPrior {
            tables: self
                .tables
                .iter()
                .map(|v| {
                    let mut t = [0.0; 4];
                    for a in Label::ALL {
                        t[joint_index(a.x(), a.z())] = v[a.index()];
                    }
                    t
                })
                .collect(),
        }
    }
}

/// Draws `(x_j, z_j)` independently from each Q_j using ChaCha8 seeded from
/// `seed`. The same seed always yields the same error.
pub fn sample_error(prior: &PauliPrior, seed: u64) -> PauliError {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_error_with(prior, &mut rng)
}

pub fn sample_error_with<R: Rng + ?Sized>(prior: &PauliPrior, rng: &mut R) -> PauliError {
    let n = prior.n();
    let mut e = PauliError::zeros(n);
    for (j, t) in prior.tables.iter().enumerate() {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        // fall back to the last positive entry when u lands in the roundoff gap
        let mut pick = t.iter().rposition(|&v| v > 0.0).unwrap_or(0);
        for (k, &v) in t.iter().enumerate() {
            acc += v;
            if u < acc && v > 0.0 {
                pick = k;
                break;
            }
        }
        e.x[j] = (pick & 1) as u8;
        e.z[j] = (pick >> 1) as u8;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeling_table() {
        assert_eq!(phi(0, 0), Label::Zero);
        assert_eq!(phi(1, 0), Label::One);
        assert_eq!(phi(0, 1), Label::Omega);
        assert_eq!(phi(1, 1), Label::OmegaSq);
        for a in Label::ALL {
            assert_eq!(phi(a.x(), a.z()), a);
        }
    }

    #[test]
    fn depolarizing_tables() {
        let p = PauliPrior::depolarizing(3, 0.3).unwrap();
        let t = p.table(1);
        assert!((t[0] - 0.7).abs() < 1e-15);
        for v in &t[1..] {
            assert!((v - 0.1).abs() < 1e-15);
        }
        assert_eq!(PauliPrior::depolarizing(2, 0.0).unwrap().table(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(PauliPrior::depolarizing(2, 0.75).unwrap().table(0), &[0.25; 4]);
        assert!(matches!(
            PauliPrior::depolarizing(2, 1.5),
            Err(Error::InvalidProbability(_))
        ));
        assert!(PauliPrior::depolarizing(2, -0.1).is_err());
    }

    #[test]
    fn prior_validation() {
        assert!(PauliPrior::new(vec![[0.5, 0.5, 0.1, 0.0]]).is_err());
        assert!(PauliPrior::new(vec![[1.2, -0.2, 0.0, 0.0]]).is_err());
        assert!(PauliPrior::new(vec![[f64::NAN, 0.0, 0.0, 1.0]]).is_err());
    }

    #[test]
    fn marginals_examples() {
        let (qx, qz) = PauliPrior::depolarizing(1, 0.3).unwrap().marginals();
        assert!((qx[0][0] - 0.8).abs() < 1e-15 && (qx[0][1] - 0.2).abs() < 1e-15);
        assert!((qz[0][0] - 0.8).abs() < 1e-15);

        let a = [0.9, 0.1];
        let b = [0.6, 0.4];
        let (qx, qz) = PauliPrior::product(&[a], &[b]).unwrap().marginals();
        assert!((qx[0][0] - a[0]).abs() < 1e-15 && (qz[0][1] - b[1]).abs() < 1e-15);

        let (qx, qz) = PauliPrior::depolarizing(1, 0.75).unwrap().marginals();
        assert_eq!(qx[0], [0.5, 0.5]);
        assert_eq!(qz[0], [0.5, 0.5]);
    }

    #[test]
    fn relabel_examples() {
        let r = PauliPrior::new(vec![[0.5, 0.2, 0.2, 0.1], [0.0, 0.0, 1.0, 0.0]])
            .unwrap()
            .relabel();
        assert_eq!(r.table(0), &[0.5, 0.2, 0.2, 0.1]);
        assert_eq!(r.q(1, Label::Omega), 1.0);
        assert_eq!(r.q(1, Label::One), 0.0);
    }

    #[test]
    fn sampling_edge_cases() {
        let p0 = PauliPrior::depolarizing(50, 0.0).unwrap();
        assert!(sample_error(&p0, 7).is_zero());
        let p1 = PauliPrior::depolarizing(50, 1.0).unwrap();
        assert_eq!(sample_error(&p1, 7).weight(), 50);
        let y = PauliPrior::y_only(200, 0.5).unwrap();
        let e = sample_error(&y, 3);
        assert_eq!(e.x, e.z);
    }

    #[test]
    fn sampling_frequency() {
        let n = 100_000;
        let e = sample_error(&PauliPrior::depolarizing(n, 0.3).unwrap(), 2024);
        let identity = (0..n).filter(|&j| e.x[j] == 0 && e.z[j] == 0).count();
        let freq = identity as f64 / n as f64;
        assert!((freq - 0.7).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let p = PauliPrior::depolarizing(500, 0.2).unwrap();
        assert_eq!(sample_error(&p, 99), sample_error(&p, 99));
        assert_ne!(sample_error(&p, 99), sample_error(&p, 100));
    }
}
