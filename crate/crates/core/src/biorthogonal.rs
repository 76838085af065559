//! Finite Markushevich systems: a basis `y_j` of a subspace together with
//! ambient dual vectors `f_j` satisfying `⟨y_j, f_k⟩ = δ_jk`.

use std::sync::Arc;

use serde::Serialize;

use crate::echelon::{Echelon, SparseRow};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, SparseVector, VectorFamily};
use crate::support_graph::IncidenceIndex;
use crate::verification::{subspace_equal, SubspaceBasis};

/// `vectors` and `functionals` share ids; the functional with id `j` is
/// biorthogonal to the vector with id `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiorthogonalSystem<S> {
    vectors: VectorFamily<S>,
    functionals: VectorFamily<S>,
}

impl<S: Scalar> BiorthogonalSystem<S> {
    /// Pairs vectors with functionals; only the models and ids are checked.
    pub fn from_parts(vectors: VectorFamily<S>, functionals: VectorFamily<S>) -> Result<Self> {
        vectors.space().dual().check_same(functionals.space())?;
        if !vectors.ids().eq(functionals.ids()) {
            return Err(Error::ForeignDecomposition);
        }
        Ok(BiorthogonalSystem {
            vectors,
            functionals,
        })
    }

    pub fn vectors(&self) -> &VectorFamily<S> {
        &self.vectors
    }

    pub fn functionals(&self) -> &VectorFamily<S> {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `[⟨y_i, f_j⟩]`, row `i` over column `j`, positions rather than ids.
    pub fn evaluation_matrix(&self) -> Vec<SparseRow<S>> {
        self.vectors
            .vectors()
            .map(|y| {
                self.functionals
                    .vectors()
                    .enumerate()
                    .map(|(j, f)| (j as u64, y.dot(f)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect()
    }

    /// Checks biorthogonality, `span{y_j} = Y`, and totality of the `f_j` on `Y`.
    pub fn certify(&self, y: &VectorFamily<S>, tol: f64) -> Result<MarkushevichCertificate> {
        let span_equal = subspace_equal(
            &SubspaceBasis::span(&self.vectors),
            &SubspaceBasis::span(y),
            tol,
        )?;
        let matrix = self.evaluation_matrix();
        let mut max_deviation = 0.0f64;
        let mut biorthogonal = true;
        for (i, row) in matrix.iter().enumerate() {
            let mut diagonal_seen = false;
            for (j, v) in row {
                let target = if *j == i as u64 {
                    diagonal_seen = true;
                    S::one()
                } else {
                    S::zero()
                };
                let deviation = (v.clone() - target).abs();
                if S::EXACT {
                    biorthogonal &= deviation.is_zero();
                }
                max_deviation = max_deviation.max(deviation.to_f64());
            }
            if !diagonal_seen {
                biorthogonal = false;
                max_deviation = max_deviation.max(1.0);
            }
        }
        if !S::EXACT {
            biorthogonal = max_deviation <= tol;
        }
        let evaluation_rank = Echelon::new(matrix).rank();
        let dim = y.rank();
        Ok(MarkushevichCertificate {
            dim,
            biorthogonal,
            max_deviation,
            span_equal,
            evaluation_rank,
            total: evaluation_rank == dim,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkushevichCertificate {
    pub dim: usize,
    pub biorthogonal: bool,
    /// `max |⟨y_j, f_k⟩ − δ_jk|`.
    pub max_deviation: f64,
    pub span_equal: bool,
    pub evaluation_rank: usize,
    /// The `f_j` have no common zero in `Y` other than `0`.
    pub total: bool,
}

impl MarkushevichCertificate {
    pub fn passed(&self) -> bool {
        self.biorthogonal && self.span_equal && self.total
    }
}

/// Extracts the members of `Y` that raise the rank in id order and solves for
/// functionals supported on the pivot coordinates of that basis.
pub fn markushevich<S: Scalar>(y: &VectorFamily<S>) -> Result<BiorthogonalSystem<S>> {
    let echelon = y.echelon();
    if echelon.rank() == 0 {
        return Err(Error::ZeroSubspace);
    }
    let members = y.members();
    let mut vectors = VectorFamily::new(y.space().clone());
    for &i in echelon.independent() {
        let (id, v) = &members[i];
        vectors.push(*id, v.clone())?;
    }
    let pivots = echelon.pivots();
    let k = pivots.len();
    // Rows of [M | I] with M[i][c] = y_i(pivot c); its reduced form is [I | M⁻¹].
    let augmented: Vec<SparseRow<S>> = vectors
        .vectors()
        .enumerate()
        .map(|(i, v)| {
            let mut row: SparseRow<S> = pivots
                .iter()
                .enumerate()
                .map(|(c, &p)| (c as u64, v.get(CoordinateLabel(p))))
                .filter(|(_, x)| !x.is_zero())
                .collect();
            row.push(((k + i) as u64, S::one()));
            row
        })
        .collect();
    let inverse = Echelon::new(augmented);
    let dual = Arc::new(y.space().dual());
    let mut columns: Vec<SparseRow<S>> = vec![Vec::new(); k];
    for (i, row) in inverse.rows().iter().enumerate() {
        for (col, v) in row {
            if *col >= k as u64 {
                columns[*col as usize - k].push((pivots[i], v.clone()));
            }
        }
    }
    let mut functionals = VectorFamily::new(dual.clone());
    for (id, col) in vectors.ids().zip(columns) {
        functionals.push(id, SparseVector::from_row(dual.clone(), col))?;
    }
    Ok(BiorthogonalSystem {
        vectors,
        functionals,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub count: usize,
    /// Ids `j` with `⟨y_j, f⟩ ≠ 0`, ascending.
    pub witnesses: Vec<u64>,
}

pub fn incidence_count<S: Scalar>(
    system: &BiorthogonalSystem<S>,
    f: &SparseVector<S>,
) -> Result<Incidence> {
    let mut witnesses = Vec::new();
    let f_scale = f.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    for (id, y) in system.vectors.members() {
        let value = y.pairing(f)?;
        let scale = f_scale * y.values().map(|v| v.to_f64().abs()).sum::<f64>();
        if !value.negligible(scale) {
            witnesses.push(*id);
        }
    }
    Ok(Incidence {
        count: witnesses.len(),
        witnesses,
    })
}

/// Pairs each coordinate functional `e*_γ` with the system and compares the
/// witnesses against the incidence index of the vectors. Returns the first
/// coordinate where they differ.
pub fn coordinate_restriction_mismatch<S: Scalar>(
    system: &BiorthogonalSystem<S>,
) -> Result<Option<CoordinateLabel>> {
    let index = IncidenceIndex::build(&system.vectors);
    let dual = Arc::new(system.vectors.space().dual());
    for (label, ids) in index.iter() {
        let e = SparseVector::unit(dual.clone(), label)?;
        if incidence_count(system, &e)?.witnesses != ids {
            return Ok(Some(label));
        }
    }
    Ok(None)
}
