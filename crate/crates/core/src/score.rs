//! Single entry point dispatching a trajectory pair to any measure.

use crate::align::{
    dtw_banded, hard_path_from_soft, pairwise_cost, soft_alignment_banded, soft_dtw_banded,
};
use crate::error::Result;
use crate::hetero;
use crate::model::{AlignmentPath, Measure, MeasureConfig, MeasureResult, Trajectory};

/// Scores one pair with one measure. `dtw` and `soft_dtw` require matching
/// dimensions; every other measure accepts heterogeneous pairs.
pub fn score_pair(
    a: &Trajectory,
    b: &Trajectory,
    measure: Measure,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    cfg.validate()?;
    match measure {
        Measure::Dtw => {
            let cost = pairwise_cost(a, b, cfg.metric)?;
            let out = dtw_banded(&cost, cfg.band);
            Ok(MeasureResult {
                measure,
                discrepancy: out.discrepancy,
                path: out.path,
                iterations: 1,
                converged: true,
                params: cfg.to_params(measure),
                objective_trace: vec![out.discrepancy],
            })
        }
        Measure::SoftDtw => {
            let cost = pairwise_cost(a, b, cfg.metric)?;
            let value = soft_dtw_banded(&cost, cfg.gamma, cfg.band)?;
            let sa = soft_alignment_banded(&cost, cfg.gamma, cfg.band)?;
            let pairs = hard_path_from_soft(&sa).pairs().to_vec();
            Ok(MeasureResult {
                measure,
                discrepancy: value,
                path: AlignmentPath::soft(pairs, sa.expectation().clone()),
                iterations: 1,
                converged: true,
                params: cfg.to_params(measure),
                objective_trace: vec![value],
            })
        }
        Measure::Gdtw => hetero::gdtw(a, b, cfg),
        Measure::SoftGdtw => hetero::soft_gdtw(a, b, cfg),
        Measure::DtwGi => Ok(hetero::dtw_gi(a, b, cfg)?.result),
        Measure::SoftDtwGi => Ok(hetero::soft_dtw_gi(a, b, cfg)?.result),
        Measure::Ctw => Ok(hetero::ctw(a, b, cfg)?.result),
    }
}
