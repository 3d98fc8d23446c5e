use super::hist::SizeHistogram;
use crate::error::{ModelError, Result};
use crate::theory::{LawKind, TheoreticalLaw};

/// Total-variation distance `1/2 sum |p - q|` between two binned laws.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "binned laws differ in length");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawDistance {
    pub kind: LawKind,
    pub shape: f64,
    pub mean: f64,
    pub tv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adjudication {
    pub k_max: u64,
    pub distances: Vec<LawDistance>,
    /// Index into `distances` of the closest law; ties go to the earlier one.
    pub winner: usize,
}

impl Adjudication {
    pub fn winner(&self) -> &LawDistance {
        &self.distances[self.winner]
    }
}

/// Compares the tail-binned histogram with each law and picks the closest.
pub fn law_adjudicate(
    h: &SizeHistogram,
    laws: &[TheoreticalLaw],
    k_max: u64,
) -> Result<Adjudication> {
    if k_max < 2 {
        return Err(ModelError::Domain("k_max must be >= 2".into()));
    }
    if laws.is_empty() {
        return Err(ModelError::Domain("no laws to compare".into()));
    }
    let emp = h.binned(k_max)?;
    let mut distances = Vec::with_capacity(laws.len());
    for law in laws {
        let q = law.binned(k_max)?;
        distances.push(LawDistance {
            kind: law.kind,
            shape: law.shape(),
            mean: law.mean(),
            tv: tv_distance(&emp, &q),
        });
    }
    let mut winner = 0;
    for (i, d) in distances.iter().enumerate() {
        if d.tv < distances[winner].tv {
            winner = i;
        }
    }
    Ok(Adjudication {
        k_max,
        distances,
        winner,
    })
}
