//! Flatness of a finitely presented module at the origin of its base.
//!
//! A problem instance is a presentation: generators of a relation submodule
//! `M` of a free module `R^q` over `R = Q[y; x]`, together with an ideal
//! cutting out the base space inside the `y`-coordinates (the zero ideal
//! means the base is the whole affine space). The module under test is the
//! quotient `R^q / M`, and the question is whether it is flat over the base
//! near the origin.
//!
//! Over a regular (full affine) base the test is a single substitution and
//! colon: pull `M` back along the last blow-up chart of the base origin and
//! compare with its colon by the last base variable. Equality is flatness;
//! any element of the colon outside the pulled-back module is a checkable
//! witness against it.
//!
//! Over a singular base the base ideal is carried through a usable blow-up
//! chart first (see [`crate::blowup`]); the same colon comparison then runs
//! against the exceptional coordinate, with one extra wrinkle: when the
//! colon strictly grows but the annihilator of the quotient is invertible
//! somewhere at the origin, the discrepancy is invisible locally and the
//! verdict is still flat. Otherwise the exceptional coordinate has been
//! caught dividing zero, which refutes flatness outright only under extra
//! hypotheses on the base and the support of the module; without them the
//! verdict stays a zero-divisor report rather than a refutation.

use crate::blowup::{select_chart, BlowupChart, ChartSearchOptions, SelectedChart};
use crate::error::Error;
use crate::groebner::{FreeModuleElement, Submodule};
use crate::par;
use crate::poly::{Polynomial, VarUniverse};
use crate::Result;
use std::fmt;
use std::sync::Arc;

/// A finitely presented module over `Q[y; x]`, normalized for the flatness
/// tests: relation generators in `R^q`, plus the ideal of the base space.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    universe: Arc<VarUniverse>,
    rank: usize,
    module: Submodule,
    base_ideal: Submodule,
}

impl ModulePresentation {
    /// Build and normalize a presentation.
    ///
    /// Base-ideal generators must only involve base variables. When the
    /// universe has no fiber variables at all, a fresh one is appended and
    /// made to act as zero on the module; the tests require at least one
    /// fiber variable and this embedding changes no flatness answer. The
    /// relation module always absorbs `base_ideal * R^q`, since the module
    /// only matters over the base space.
    pub fn new(
        universe: &Arc<VarUniverse>,
        rank: usize,
        module_gens: Vec<FreeModuleElement>,
        base_gens: Vec<Polynomial>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::RankMismatch { expected: 1, found: 0 });
        }
        let base = universe.base_indices();
        if base.is_empty() {
            return Err(Error::Input("a presentation needs at least one base variable".into()));
        }
        for g in &base_gens {
            if !g.supported_on(&base) {
                return Err(Error::VariableOutOfScope {
                    name: "fiber variable".into(),
                    context: "base-ideal generators live in the base variables",
                });
            }
        }

        let (universe, module_gens, base_gens) = if universe.fiber_indices().is_empty() {
            let (extended, fresh) = universe.with_fresh_fiber("x");
            let x = Polynomial::var(&extended, fresh);
            let mut gens: Vec<FreeModuleElement> = module_gens
                .iter()
                .map(|g| g.map_components(|p| p.extend_appended(&extended)))
                .collect();
            for j in 0..rank {
                gens.push(FreeModuleElement::basis_times(&extended, rank, j, x.clone()));
            }
            let base_gens =
                base_gens.iter().map(|p| p.extend_appended(&extended)).collect();
            (extended, gens, base_gens)
        } else {
            (universe.clone(), module_gens, base_gens)
        };

        let base_ideal = Submodule::ideal(&universe, base_gens)?;
        let mut module = Submodule::new(&universe, rank, module_gens)?;
        if !base_ideal.is_zero_module() {
            module = module.plus(&base_ideal.times_free_module(rank))?;
        }
        Ok(ModulePresentation { universe, rank, module, base_ideal })
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The normalized relation submodule of `R^q`.
    pub fn module(&self) -> &Submodule {
        &self.module
    }

    pub fn base_ideal(&self) -> &Submodule {
        &self.base_ideal
    }

    /// True when the base is the whole affine space.
    pub fn is_regular_base(&self) -> bool {
        self.base_ideal.is_zero_module()
    }
}

/// Outcome of a flatness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatnessStatus {
    Flat,
    NotFlat,
    /// The exceptional coordinate of the chart divides zero on the chart
    /// module. This refutes flatness only under the extra assumptions in
    /// [`FlatnessAssumptions`]; without them it is reported as found.
    ZeroDivisorFound,
}

impl fmt::Display for FlatnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatnessStatus::Flat => write!(f, "Flat"),
            FlatnessStatus::NotFlat => write!(f, "NotFlat"),
            FlatnessStatus::ZeroDivisorFound => write!(f, "ZeroDivisorFound"),
        }
    }
}

/// Extra hypotheses that upgrade a zero-divisor report to a refutation:
/// the base is an integral domain, and the module is supported on a
/// subvariety embedded in the base-times-fiber space in the expected way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlatnessAssumptions {
    pub domain: bool,
    pub embedding: bool,
}

/// Verdict of a flatness test, with enough data to re-check it.
#[derive(Clone, Debug)]
pub struct FlatnessVerdict {
    pub status: FlatnessStatus,
    /// For negative verdicts: an element of the colon that lies outside the
    /// compared module (over the chart universe for singular bases).
    pub witness: Option<FreeModuleElement>,
    /// The coordinate multiplying the witness into the module.
    pub multiplier: Option<Polynomial>,
    /// The compared module the witness is measured against.
    pub compared: Option<Submodule>,
    /// Chart data when the singular-base route ran.
    pub chart: Option<SelectedChart>,
    /// Annihilator of the colon quotient, when it was computed.
    pub annihilator: Option<Submodule>,
    /// Human-readable reason for the verdict.
    pub certificate: String,
}

impl FlatnessVerdict {
    fn flat(certificate: String) -> Self {
        FlatnessVerdict {
            status: FlatnessStatus::Flat,
            witness: None,
            multiplier: None,
            compared: None,
            chart: None,
            annihilator: None,
            certificate,
        }
    }
}

/// `multiplier * witness` lies in the module but `witness` does not: the
/// two membership tests anyone can replay to validate a negative verdict.
pub fn witness_check(
    witness: &FreeModuleElement,
    module: &Submodule,
    multiplier: &Polynomial,
) -> Result<bool> {
    let scaled = witness.scale_poly(multiplier);
    Ok(module.contains(&scaled)? && !module.contains(witness)?)
}

/// Flatness over a regular base: compare the pullback of the relation
/// module along the last chart with its colon by the last base variable.
pub fn flat_test_regular(presentation: &ModulePresentation) -> Result<FlatnessVerdict> {
    if !presentation.is_regular_base() {
        return Err(Error::Input(
            "the regular-base test needs a zero base ideal; use the dispatching test".into(),
        ));
    }
    let universe = presentation.universe();
    let chart = BlowupChart::last(universe);
    let pulled = chart.pullback_module(presentation.module());
    let yn = Polynomial::var(universe, chart.exceptional_index());
    let colon = pulled.colon(&yn)?;
    match first_outside(&colon, &pulled)? {
        None => Ok(FlatnessVerdict::flat(
            "pulled-back relation module equals its colon by the last base variable".into(),
        )),
        Some(witness) => {
            debug_assert!(witness_check(&witness, &pulled, &yn)?);
            Ok(FlatnessVerdict {
                status: FlatnessStatus::NotFlat,
                witness: Some(witness),
                multiplier: Some(yn),
                compared: Some(pulled),
                chart: None,
                annihilator: None,
                certificate: "colon by the last base variable strictly contains the \
                              pulled-back relation module; the witness multiplies into \
                              it but does not lie in it"
                    .into(),
            })
        }
    }
}

/// Flatness over a singular base: carry the presentation through a usable
/// blow-up chart and compare the chart module with its colon by the
/// exceptional coordinate, discounting any discrepancy that is invisible
/// at the chart origin.
pub fn flat_test_singular(
    presentation: &ModulePresentation,
    assumptions: FlatnessAssumptions,
    options: &ChartSearchOptions,
) -> Result<FlatnessVerdict> {
    if presentation.is_regular_base() {
        return Err(Error::ZeroBaseIdeal);
    }
    let selected = select_chart(presentation.base_ideal(), options)?;
    let rank = presentation.rank();

    let sheared = match &selected.change {
        Some(change) => change.apply_module(presentation.module())?,
        None => presentation.module().clone(),
    };
    let target = presentation.universe().blowup_image();
    let gens: Vec<FreeModuleElement> = sheared
        .gens()
        .iter()
        .map(|g| {
            g.map_components(|p| selected.chart.pullback_poly(p).rename_universe(&target))
        })
        .collect();
    let chart_module = Submodule::new(&target, rank, gens)?
        .plus(&selected.transform.times_free_module(rank))?;
    let exceptional = Polynomial::var(&target, selected.chart.exceptional_index());

    let colon = chart_module.colon(&exceptional)?;
    let where_ = format!("on {}", selected.chart);
    match first_outside(&colon, &chart_module)? {
        None => {
            let mut verdict = FlatnessVerdict::flat(format!(
                "chart module equals its colon by the exceptional coordinate {where_}"
            ));
            verdict.chart = Some(selected);
            Ok(verdict)
        }
        Some(witness) => {
            let annihilator = chart_module.quotient_ideal(&colon)?;
            if !annihilator.vanishes_at_origin() {
                let mut verdict = FlatnessVerdict::flat(format!(
                    "the colon quotient is annihilated by a function invertible at the \
                     origin, so the discrepancy is invisible locally {where_}"
                ));
                verdict.chart = Some(selected);
                verdict.annihilator = Some(annihilator);
                return Ok(verdict);
            }
            debug_assert!(witness_check(&witness, &chart_module, &exceptional)?);
            let (status, certificate) = if assumptions.domain && assumptions.embedding {
                (
                    FlatnessStatus::NotFlat,
                    format!(
                        "the exceptional coordinate divides zero on the chart module \
                         {where_}; with the base a domain and the support embedded as \
                         assumed, this refutes flatness"
                    ),
                )
            } else {
                (
                    FlatnessStatus::ZeroDivisorFound,
                    format!(
                        "the exceptional coordinate divides zero on the chart module \
                         {where_}, and the annihilator of the colon quotient vanishes \
                         at the origin; refutation needs the domain and embedding \
                         assumptions"
                    ),
                )
            };
            Ok(FlatnessVerdict {
                status,
                witness: Some(witness),
                multiplier: Some(exceptional),
                compared: Some(chart_module),
                chart: Some(selected),
                annihilator: Some(annihilator),
                certificate,
            })
        }
    }
}

/// Dispatch on the base: the regular test when the base ideal is zero, the
/// chart-based test otherwise.
pub fn flat_test(
    presentation: &ModulePresentation,
    assumptions: FlatnessAssumptions,
    options: &ChartSearchOptions,
) -> Result<FlatnessVerdict> {
    if presentation.is_regular_base() {
        flat_test_regular(presentation)
    } else {
        flat_test_singular(presentation, assumptions, options)
    }
}

/// Regular-base tests for a whole batch of presentations, evaluated in
/// parallel when the `parallel` feature is on.
pub fn flat_test_regular_batch(
    presentations: &[ModulePresentation],
) -> Result<Vec<FlatnessVerdict>> {
    par::map_slice(presentations, flat_test_regular).into_iter().collect()
}

/// First generator of `larger` that does not lie in `smaller`, or `None`
/// if all of them do (the deterministic witness choice).
fn first_outside(
    larger: &Submodule,
    smaller: &Submodule,
) -> Result<Option<FreeModuleElement>> {
    if smaller.contains_all(larger.gens())? {
        return Ok(None);
    }
    for g in larger.gens() {
        if !smaller.contains(g)? {
            return Ok(Some(g.clone()));
        }
    }
    unreachable!("the batch check reported an element outside");
}
