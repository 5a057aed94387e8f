//! Measure in, every derived object out.

use crate::cdsp::{self, CdspVerdict, OracleSummary};
use crate::dbr_ident::SchurIdentification;
use crate::dirichlet::CostaraModel;
use crate::error::Result;
use crate::measure::MeasureSpec;
use crate::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub trunc: usize,
    pub nmax: usize,
    pub oracle: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            trunc: 64,
            nmax: 6,
            oracle: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub model: CostaraModel,
    pub ident: SchurIdentification,
    pub verdict: CdspVerdict,
    /// From the row-rule polynomials; two atoms only.
    pub a7_det: Option<Complex>,
    /// From the kernel-consistent polynomials; two atoms only.
    pub a7_det_kernel: Option<Complex>,
    pub a5: Complex,
    pub oracle: Option<OracleSummary>,
}

impl Analysis {
    pub fn run(mu: &MeasureSpec, opts: &AnalysisOptions) -> Result<Self> {
        let model = CostaraModel::build(mu)?;
        let ident = SchurIdentification::build(&model)?;
        let verdict = cdsp::closed_form_test(&model, &ident);
        let (a7_det, a7_det_kernel) = if model.num_atoms() == 2 {
            let roots = &model.fact.outer_roots;
            (
                Some(cdsp::a7_determinant(roots, &ident.row_polys)?),
                Some(cdsp::a7_determinant(roots, &ident.p_polys)?),
            )
        } else {
            (None, None)
        };
        let a5 = cdsp::a5_diagnostic(&model);
        let oracle = if opts.oracle {
            Some(cdsp::run_oracle(mu, opts.trunc, opts.nmax)?)
        } else {
            None
        };
        Ok(Analysis {
            model,
            ident,
            verdict,
            a7_det,
            a7_det_kernel,
            a5,
            oracle,
        })
    }
}
