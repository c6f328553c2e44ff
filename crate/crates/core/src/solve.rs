//! One entry point for every variant and mode, producing solution documents.

use crate::error::SolveError;
use crate::instance::{Instance, Mode, Parameters, SolutionDocument, Variant};
use crate::metric::{BallSolution, PartitionSolution};
use crate::msd::{exact_msd, exact_msd_outliers, msd_report};
use crate::msr::{exact_msr, msr_report};
use crate::oracles::{oracle_kcenter, oracle_msd, oracle_msr};
use crate::pipeline::ComponentSummary;
use crate::variants::{exact_kcenter, fair_msr_report, k_center_approx, ClusterConstraint};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest {
    pub variant: Variant,
    pub mode: Mode,
    pub k: usize,
    pub g: usize,
    pub alpha: f64,
    /// Required in approximate mode, ignored otherwise.
    pub epsilon: Option<f64>,
    pub fair: bool,
    pub balance: bool,
}

impl SolveRequest {
    pub fn new(variant: Variant, mode: Mode, k: usize) -> Self {
        SolveRequest { variant, mode, k, g: 0, alpha: 1.0, epsilon: None, fair: false, balance: false }
    }

    fn parameters(&self) -> Parameters {
        Parameters {
            k: self.k,
            g: self.g,
            alpha: self.alpha,
            epsilon: if self.mode == Mode::Approx { self.epsilon } else { None },
            fair: self.fair,
            balance: self.balance,
        }
    }

    fn validate(&self, inst: &Instance) -> Result<(), SolveError> {
        let bad = |m: &str| Err(SolveError::InvalidParameter(m.into()));
        if self.mode == Mode::Approx && self.epsilon.is_none() {
            return bad("approximate mode needs an epsilon");
        }
        if self.variant != Variant::AlphaMsr && self.alpha != 1.0 && self.mode != Mode::Oracle {
            return bad("alpha other than 1 needs the alpha-msr variant or oracle mode");
        }
        if self.fair {
            if self.variant != Variant::Msr && self.variant != Variant::AlphaMsr {
                return bad("fairness caps apply to min-sum-radii only");
            }
            let Some(f) = &inst.fair else {
                return bad("--fair needs colors and caps in the instance");
            };
            if f.k() != self.k {
                return Err(SolveError::InvalidParameter(format!("caps sum to {} but k = {}", f.k(), self.k)));
            }
            if self.mode == Mode::Approx && (self.g > 0 || self.alpha != 1.0) {
                return bad("fair approximation supports neither outliers nor alpha");
            }
            if self.mode == Mode::Exact {
                return bad("no exact fair solver; use oracle mode");
            }
        }
        if self.balance {
            if self.variant != Variant::Msd {
                return bad("balance constraints apply to min-sum-diameters only");
            }
            if inst.balance.is_none() {
                return bad("--balance needs a balance section in the instance");
            }
            if self.mode == Mode::Exact && self.g > 0 {
                return bad("exact balanced solving does not support outliers");
            }
        }
        if self.variant == Variant::KCenter && self.g > 0 {
            return bad("k-center does not support outliers");
        }
        Ok(())
    }
}

enum Solved {
    Balls(BallSolution),
    Parts(PartitionSolution),
}

/// Runs the requested solver on `inst`.
pub fn solve(inst: &Instance, req: &SolveRequest) -> Result<SolutionDocument, SolveError> {
    req.validate(inst)?;
    let space = &inst.space;
    let (k, g, alpha) = (req.k, req.g, req.alpha);
    let constraint: Option<&dyn ClusterConstraint> = match (&inst.balance, req.balance) {
        (Some(b), true) => Some(b),
        _ => None,
    };
    let fair = if req.fair { inst.fair.as_ref() } else { None };
    let eps = req.epsilon.unwrap_or(1.0);
    let infeasible = || SolveError::Infeasible("no solution satisfies the constraints".into());
    let mut components: Vec<ComponentSummary> = Vec::new();

    let solved = match (req.variant, req.mode) {
        (Variant::Msr | Variant::AlphaMsr, Mode::Approx) => match fair {
            Some(f) => {
                let r = fair_msr_report(space, f, eps)?;
                components = r.components;
                Solved::Balls(r.solution)
            }
            None => {
                let r = msr_report(space, k, eps, g, alpha)?;
                components = r.components;
                Solved::Balls(r.solution)
            }
        },
        (Variant::Msr | Variant::AlphaMsr, Mode::Exact) => Solved::Balls(exact_msr(space, k, g, alpha)?),
        (Variant::Msr | Variant::AlphaMsr, Mode::Oracle) => {
            Solved::Balls(oracle_msr(space, k, g, alpha, fair)?.ok_or_else(infeasible)?.solution)
        }
        (Variant::Msd, Mode::Approx) => {
            let r = msd_report(space, k, eps, g, constraint)?;
            components = r.components;
            Solved::Parts(r.solution)
        }
        (Variant::Msd, Mode::Exact) if g == 0 => Solved::Parts(exact_msd(space, k, constraint)?),
        (Variant::Msd, Mode::Exact) => Solved::Parts(exact_msd_outliers(space, k, g)?),
        (Variant::Msd, Mode::Oracle) => {
            Solved::Parts(oracle_msd(space, k, g, alpha, constraint)?.ok_or_else(infeasible)?.solution)
        }
        (Variant::KCenter, Mode::Approx) => Solved::Balls(k_center_approx(space, k, eps)?),
        (Variant::KCenter, Mode::Exact) => Solved::Balls(exact_kcenter(space, k)?),
        (Variant::KCenter, Mode::Oracle) => Solved::Balls(oracle_kcenter(space, k)?.solution),
    };

    let mut doc = SolutionDocument {
        variant: req.variant,
        mode: req.mode,
        parameters: req.parameters(),
        cost: 0.0,
        balls: None,
        clusters: None,
        outliers: vec![],
        components,
        wall_time_ms: None,
    };
    match solved {
        Solved::Balls(sol) => {
            doc.cost = if req.variant == Variant::KCenter { sol.max_radius() } else { sol.cost(alpha) };
            doc.balls = Some(sol.balls);
            doc.outliers = sol.outliers;
        }
        Solved::Parts(sol) => {
            doc.cost = sol.cost(space, alpha);
            doc.clusters = Some(sol.clusters);
            doc.outliers = sol.outliers;
        }
    }
    Ok(doc)
}
