//! SDN orchestrator for multi-operator management: request smoothing,
//! proportional grant optimization, and inter-operator sharing of
//! slack uplink bitrate.
//!
//! The optimization problem posed here (maximize the grant sum subject
//! to nonnegativity, per-request caps, and request-proportional
//! constraint shares) is separable, so the proportional closed form is
//! optimal and no runtime LP solver is needed; the test suite checks
//! the closed form against an independent simplex oracle.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OrchestratorError {
    #[error("matrix must carry at least one Sm-GW and one operator")]
    EmptyMatrix,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("negative rate {rate} at ({smgw}, {operator})")]
    NegativeRate {
        smgw: usize,
        operator: usize,
        rate: f64,
    },
    #[error("negative constraint {limit} for operator {operator}")]
    NegativeConstraint { operator: usize, limit: f64 },
    #[error("constraint vector has {got} entries, expected {expected}")]
    ConstraintLength { got: usize, expected: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("operator {0} carries no slack (it is not in sharing)")]
    NonSharingOperator(usize),
    #[error("smoothing weight must lie in [0, 1], got {0}")]
    BadAlpha(f64),
    #[error("request smoothing needs at least one eNB sample")]
    NoEnbSamples,
    #[error("cycle duration must be positive, got {0}")]
    BadCycle(f64),
    #[error("at most one operator may be in sharing and one in excess; found {sharing} sharing and {excess} excess")]
    MultiOperatorSharing { sharing: usize, excess: usize },
}

/// S x O nonnegative rate matrix; rows are Sm-GWs, columns operators.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    smgws: usize,
    operators: usize,
    data: Vec<f64>,
}

/// Smoothed Sm-GW requests R_so.
pub type RequestMatrix = RateMatrix;
/// Orchestrator grants G_so.
pub type GrantMatrix = RateMatrix;
/// Achieved flows X_so.
pub type FlowMatrix = RateMatrix;

impl RateMatrix {
    pub fn zeros(smgws: usize, operators: usize) -> Result<Self, OrchestratorError> {
        if smgws == 0 || operators == 0 {
            return Err(OrchestratorError::EmptyMatrix);
        }
        Ok(RateMatrix {
            smgws,
            operators,
            data: vec![0.0; smgws * operators],
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, OrchestratorError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(OrchestratorError::EmptyMatrix);
        }
        let operators = rows[0].len();
        let mut m = RateMatrix::zeros(rows.len(), operators)?;
        for (s, row) in rows.iter().enumerate() {
            if row.len() != operators {
                return Err(OrchestratorError::RaggedRow {
                    row: s,
                    got: row.len(),
                    expected: operators,
                });
            }
            for (o, &rate) in row.iter().enumerate() {
                if rate < 0.0 {
                    return Err(OrchestratorError::NegativeRate {
                        smgw: s,
                        operator: o,
                        rate,
                    });
                }
                m.set(s, o, rate);
            }
        }
        Ok(m)
    }

    pub fn smgws(&self) -> usize {
        self.smgws
    }

    pub fn operators(&self) -> usize {
        self.operators
    }

    pub fn get(&self, smgw: usize, operator: usize) -> f64 {
        self.data[smgw * self.operators + operator]
    }

    pub fn set(&mut self, smgw: usize, operator: usize, rate: f64) {
        self.data[smgw * self.operators + operator] = rate;
    }

    pub fn row(&self, smgw: usize) -> &[f64] {
        &self.data[smgw * self.operators..(smgw + 1) * self.operators]
    }

    pub fn column_sum(&self, operator: usize) -> f64 {
        (0..self.smgws).map(|s| self.get(s, operator)).sum()
    }

    /// Elementwise minimum; used for flows X = min(R, G).
    pub fn elementwise_min(&self, other: &RateMatrix) -> RateMatrix {
        assert_eq!(self.smgws, other.smgws);
        assert_eq!(self.operators, other.operators);
        RateMatrix {
            smgws: self.smgws,
            operators: self.operators,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.min(*b))
                .collect(),
        }
    }
}

/// Per-operator scalar uplink bitrate constraints K_o.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintVector(Vec<f64>);

impl ConstraintVector {
    pub fn new(limits: Vec<f64>) -> Result<Self, OrchestratorError> {
        for (operator, &limit) in limits.iter().enumerate() {
            if limit < 0.0 {
                return Err(OrchestratorError::NegativeConstraint { operator, limit });
            }
        }
        Ok(ConstraintVector(limits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, operator: usize) -> f64 {
        self.0[operator]
    }

    pub fn set(&mut self, operator: usize, limit: f64) -> Result<(), OrchestratorError> {
        if limit < 0.0 {
            return Err(OrchestratorError::NegativeConstraint { operator, limit });
        }
        if operator >= self.0.len() {
            return Err(OrchestratorError::IndexOutOfRange(operator));
        }
        self.0[operator] = limit;
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn check_dims(r: &RateMatrix, k: &ConstraintVector) -> Result<(), OrchestratorError> {
    if k.len() != r.operators() {
        return Err(OrchestratorError::ConstraintLength {
            got: k.len(),
            expected: r.operators(),
        });
    }
    Ok(())
}

/// How per-eNB cycle requests aggregate into the smoothed request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequestAggregation {
    /// Average over the eNBs, as stated in the smoothing update rule.
    MeanOverEnbs,
    /// Sum over the eNBs; closer to the aggregate operator demand and
    /// exposed as a documented deviation switch.
    SumOverEnbs,
}

/// Weighted-sampling smoothing of the aggregated eNB requests:
/// R(w) = alpha * agg_n(rho_n / W) + (1 - alpha) * R(w-1).
pub fn smooth_request(
    prev: f64,
    cycle_requests: &[f64],
    cycle: f64,
    alpha: f64,
    aggregation: RequestAggregation,
) -> Result<f64, OrchestratorError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(OrchestratorError::BadAlpha(alpha));
    }
    if cycle_requests.is_empty() {
        return Err(OrchestratorError::NoEnbSamples);
    }
    if !(cycle > 0.0) {
        return Err(OrchestratorError::BadCycle(cycle));
    }
    let sum: f64 = cycle_requests.iter().sum();
    let agg = match aggregation {
        RequestAggregation::MeanOverEnbs => sum / cycle_requests.len() as f64,
        RequestAggregation::SumOverEnbs => sum,
    };
    Ok(alpha * (agg / cycle) + (1.0 - alpha) * prev)
}

/// Grant a single operator column against a budget: requests in full if
/// they fit, otherwise proportional shares of the budget capped at the
/// requests.
fn grant_column(requests: &[f64], budget: f64) -> Vec<f64> {
    let total: f64 = requests.iter().sum();
    if total <= budget || total == 0.0 {
        requests.to_vec()
    } else {
        requests.iter().map(|r| budget * r / total).collect()
    }
}

/// Request-proportional grant optimization: per operator o, grants
/// equal requests when the column fits within K_o and are otherwise
/// proportional shares of K_o.
pub fn proportional_grants(
    r: &RequestMatrix,
    k: &ConstraintVector,
) -> Result<GrantMatrix, OrchestratorError> {
    check_dims(r, k)?;
    let mut g = RateMatrix::zeros(r.smgws(), r.operators())?;
    for o in 0..r.operators() {
        let requests: Vec<f64> = (0..r.smgws()).map(|s| r.get(s, o)).collect();
        for (s, grant) in grant_column(&requests, k.get(o)).into_iter().enumerate() {
            g.set(s, o, grant);
        }
    }
    Ok(g)
}

/// Operator role for inter-operator sharing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorClass {
    /// Aggregate requests below the constraint; can accept sharing
    /// traffic.
    Sharing,
    /// Aggregate requests above the constraint.
    Excess,
    /// Exactly at the constraint.
    Neither,
}

/// Classify each operator by comparing its aggregate requests to its
/// constraint.
pub fn classify_operators(
    r: &RequestMatrix,
    k: &ConstraintVector,
) -> Result<Vec<OperatorClass>, OrchestratorError> {
    check_dims(r, k)?;
    Ok((0..r.operators())
        .map(|o| {
            let sum = r.column_sum(o);
            if sum < k.get(o) {
                OperatorClass::Sharing
            } else if sum > k.get(o) {
                OperatorClass::Excess
            } else {
                OperatorClass::Neither
            }
        })
        .collect())
}

/// Unutilized slack bitrate of a sharing operator:
/// zeta = K_m - sum_s R_sm.
pub fn slack(
    r: &RequestMatrix,
    k: &ConstraintVector,
    operator: usize,
) -> Result<f64, OrchestratorError> {
    check_dims(r, k)?;
    if operator >= r.operators() {
        return Err(OrchestratorError::IndexOutOfRange(operator));
    }
    let zeta = k.get(operator) - r.column_sum(operator);
    if zeta <= 0.0 {
        return Err(OrchestratorError::NonSharingOperator(operator));
    }
    Ok(zeta)
}

/// Proportional grants where the excess operator's column is granted
/// against the augmented budget K_e + zeta, zeta being the sharing
/// operator's slack. Falls back to plain proportional grants when no
/// slack exists.
pub fn grants_with_sharing(
    r: &RequestMatrix,
    k: &ConstraintVector,
    sharing: usize,
    excess: usize,
) -> Result<GrantMatrix, OrchestratorError> {
    check_dims(r, k)?;
    if sharing >= r.operators() || excess >= r.operators() {
        return Err(OrchestratorError::IndexOutOfRange(sharing.max(excess)));
    }
    let mut g = proportional_grants(r, k)?;
    let zeta = k.get(sharing) - r.column_sum(sharing);
    if zeta <= 0.0 || sharing == excess {
        return Ok(g);
    }
    let requests: Vec<f64> = (0..r.smgws()).map(|s| r.get(s, excess)).collect();
    for (s, grant) in grant_column(&requests, k.get(excess) + zeta)
        .into_iter()
        .enumerate()
    {
        g.set(s, excess, grant);
    }
    Ok(g)
}

/// Static benchmark: each Sm-GW gets the fixed share K_o / S, with no
/// adaptation to requests.
pub fn static_equal_grants(
    smgws: usize,
    k: &ConstraintVector,
) -> Result<GrantMatrix, OrchestratorError> {
    let mut g = RateMatrix::zeros(smgws, k.len())?;
    for o in 0..k.len() {
        let share = k.get(o) / smgws as f64;
        for s in 0..smgws {
            g.set(s, o, share);
        }
    }
    Ok(g)
}

/// Long-run flows under offered load R and grants G: X = min(R, G).
pub fn flows(r: &RequestMatrix, g: &GrantMatrix) -> FlowMatrix {
    r.elementwise_min(g)
}

/// Events that make the orchestrator re-optimize.
#[derive(Debug, Clone)]
pub enum Trigger<'a> {
    /// A new smoothed request vector arrived from Sm-GW `smgw`.
    RequestVector { smgw: usize, rates: &'a [f64] },
    /// Operator `operator` announced a new constraint.
    Constraint { operator: usize, limit: f64 },
}

/// Orchestrator state: the latest request matrix and constraints, plus
/// the current grant matrix.
#[derive(Debug, Clone)]
pub struct Orchestrator {
    requests: RequestMatrix,
    constraints: ConstraintVector,
    sharing_enabled: bool,
    grants: GrantMatrix,
}

impl Orchestrator {
    pub fn new(
        smgws: usize,
        constraints: ConstraintVector,
        sharing_enabled: bool,
    ) -> Result<Self, OrchestratorError> {
        let requests = RateMatrix::zeros(smgws, constraints.len())?;
        let grants = RateMatrix::zeros(smgws, constraints.len())?;
        Ok(Orchestrator {
            requests,
            constraints,
            sharing_enabled,
            grants,
        })
    }

    pub fn requests(&self) -> &RequestMatrix {
        &self.requests
    }

    pub fn constraints(&self) -> &ConstraintVector {
        &self.constraints
    }

    pub fn grants(&self) -> &GrantMatrix {
        &self.grants
    }

    /// Grant vector pushed to one Sm-GW.
    pub fn grant_vector(&self, smgw: usize) -> &[f64] {
        self.grants.row(smgw)
    }

    /// Per-eNB grant size limit at the Sm-GW scheduler derived from an
    /// orchestrator grant: Gamma_so = G_so * W / N_s [bits per cycle].
    pub fn grant_size_limit(
        &self,
        smgw: usize,
        operator: usize,
        num_enbs: usize,
        cycle: f64,
    ) -> Result<f64, OrchestratorError> {
        if num_enbs == 0 {
            return Err(OrchestratorError::NoEnbSamples);
        }
        if !(cycle > 0.0) {
            return Err(OrchestratorError::BadCycle(cycle));
        }
        Ok(self.grants.get(smgw, operator) * cycle / num_enbs as f64)
    }

    fn reoptimize(&mut self) -> Result<(), OrchestratorError> {
        self.grants = if self.sharing_enabled {
            let classes = classify_operators(&self.requests, &self.constraints)?;
            let sharing: Vec<usize> = classes
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == OperatorClass::Sharing)
                .map(|(o, _)| o)
                .collect();
            let excess: Vec<usize> = classes
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == OperatorClass::Excess)
                .map(|(o, _)| o)
                .collect();
            if sharing.len() > 1 || excess.len() > 1 {
                return Err(OrchestratorError::MultiOperatorSharing {
                    sharing: sharing.len(),
                    excess: excess.len(),
                });
            }
            match (sharing.first(), excess.first()) {
                (Some(&m), Some(&e)) => {
                    grants_with_sharing(&self.requests, &self.constraints, m, e)?
                }
                _ => proportional_grants(&self.requests, &self.constraints)?,
            }
        } else {
            proportional_grants(&self.requests, &self.constraints)?
        };
        Ok(())
    }

    /// Apply a trigger, re-optimize, and return the new grant matrix.
    pub fn step(&mut self, trigger: Trigger) -> Result<&GrantMatrix, OrchestratorError> {
        match trigger {
            Trigger::RequestVector { smgw, rates } => {
                if smgw >= self.requests.smgws() {
                    return Err(OrchestratorError::IndexOutOfRange(smgw));
                }
                if rates.len() != self.requests.operators() {
                    return Err(OrchestratorError::RaggedRow {
                        row: smgw,
                        got: rates.len(),
                        expected: self.requests.operators(),
                    });
                }
                for (o, &rate) in rates.iter().enumerate() {
                    if rate < 0.0 {
                        return Err(OrchestratorError::NegativeRate {
                            smgw,
                            operator: o,
                            rate,
                        });
                    }
                    self.requests.set(smgw, o, rate);
                }
            }
            Trigger::Constraint { operator, limit } => {
                self.constraints.set(operator, limit)?;
            }
        }
        self.reoptimize()?;
        Ok(&self.grants)
    }
}
