//! Openness of a polynomial map at the origin.
//!
//! The map goes from a source space cut out inside the fiber variables to a
//! target cut out inside the base variables, and must send the origin to
//! the origin. The test blows up the target at the origin, forms the ideal
//! of the graph of the map on a usable chart (together with the strict
//! transform of the target ideal and the relations of the source), and
//! saturates it at the exceptional coordinate. Components sitting entirely
//! over the blown-up origin — the ones the saturation removes — are
//! precisely the obstruction: the map is open at the origin exactly when
//! every generator of the saturated ideal already lies in the radical of
//! the unsaturated one, so nothing was removed up to radical.
//!
//! The equivalence with openness needs the source to be pure-dimensional
//! and the target to be normal. Those hypotheses are not checked here;
//! callers assert them through [`OpennessOptions`], and without both the
//! verdict stays inconclusive while still reporting what the computation
//! found.

use crate::blowup::{select_chart, BlowupChart, ChartSearchOptions, CoordinateChange, SelectedChart};
use crate::error::Error;
use crate::groebner::Submodule;
use crate::poly::{ModuleOrder, Polynomial, VarUniverse};
use crate::Result;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

/// A polynomial map presented over a single universe: base variables are
/// the target coordinates, fiber variables the source coordinates.
#[derive(Clone, Debug)]
pub struct MapPresentation {
    universe: Arc<VarUniverse>,
    components: Vec<Polynomial>,
    source_ideal: Submodule,
    target_ideal: Submodule,
}

impl MapPresentation {
    /// Build a map presentation.
    ///
    /// `components` are the coordinate functions of the map, one per base
    /// variable, written in the fiber variables; each must vanish at the
    /// origin. `source_ideal_gens` cut out the source space (fiber
    /// variables only), `target_ideal_gens` the target space (base
    /// variables only); either list may be empty for a full affine space.
    pub fn new(
        universe: &Arc<VarUniverse>,
        components: Vec<Polynomial>,
        source_ideal_gens: Vec<Polynomial>,
        target_ideal_gens: Vec<Polynomial>,
    ) -> Result<Self> {
        let base = universe.base_indices();
        let fiber = universe.fiber_indices();
        if base.is_empty() || fiber.is_empty() {
            return Err(Error::Input(
                "an openness problem needs base (target) and fiber (source) variables".into(),
            ));
        }
        if components.len() != base.len() {
            return Err(Error::Input(format!(
                "the map needs one component per target coordinate: got {}, need {}",
                components.len(),
                base.len()
            )));
        }
        for (j, c) in components.iter().enumerate() {
            if !c.supported_on(&fiber) {
                return Err(Error::VariableOutOfScope {
                    name: "base variable".into(),
                    context: "map components are written in the source (fiber) variables",
                });
            }
            if !c.constant_term().is_zero() {
                return Err(Error::MapNotCentered { component: j + 1 });
            }
        }
        for g in &source_ideal_gens {
            if !g.supported_on(&fiber) {
                return Err(Error::VariableOutOfScope {
                    name: "base variable".into(),
                    context: "source-ideal generators live in the source (fiber) variables",
                });
            }
        }
        for g in &target_ideal_gens {
            if !g.supported_on(&base) {
                return Err(Error::VariableOutOfScope {
                    name: "fiber variable".into(),
                    context: "target-ideal generators live in the target (base) variables",
                });
            }
        }
        Ok(MapPresentation {
            universe: universe.clone(),
            components,
            source_ideal: Submodule::ideal(universe, source_ideal_gens)?,
            target_ideal: Submodule::ideal(universe, target_ideal_gens)?,
        })
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn source_ideal(&self) -> &Submodule {
        &self.source_ideal
    }

    pub fn target_ideal(&self) -> &Submodule {
        &self.target_ideal
    }

    /// True when the target is the whole affine space.
    pub fn is_regular_target(&self) -> bool {
        self.target_ideal.is_zero_module()
    }
}

/// Rewrite map components for a shear of the target coordinates
/// `y_j -> y_j + c_j * y_n`: the new components are
/// `f'_j = f_j - c_j * f_n`, with the last one unchanged.
pub fn change_target_coordinates(
    components: &[Polynomial],
    change: &CoordinateChange,
) -> Vec<Polynomial> {
    let last = components.last().expect("at least one component").clone();
    let mut out = Vec::with_capacity(components.len());
    for (f, c) in components.iter().zip(change.constants()) {
        if c.is_zero() {
            out.push(f.clone());
        } else {
            out.push(f - &last.mul_term(&crate::poly::Monomial::one(f.universe().len()), c));
        }
    }
    out.push(last);
    out
}

/// The graph-plus-transform ideal of the map on a usable chart of the
/// blown-up target, ready for the vertical-component test.
#[derive(Clone, Debug)]
pub struct PullbackData {
    /// The pullback ideal over the chart universe.
    pub ideal: Submodule,
    /// The exceptional coordinate over the chart universe.
    pub exceptional: Polynomial,
    /// The (possibly sheared) map components over the chart universe.
    pub components: Vec<Polynomial>,
    /// Chart data when the target is singular and a chart had to be found.
    pub chart: Option<SelectedChart>,
}

/// Build the pullback ideal: relations of the source, strict transform of
/// the target ideal, and the graph equations `f_j = z_j * z_e`, `f_e = z_e`
/// on the chosen chart.
pub fn pullback_ideal(
    map: &MapPresentation,
    options: &ChartSearchOptions,
) -> Result<PullbackData> {
    let universe = map.universe();
    let base = universe.base_indices();
    let chart_universe = universe.blowup_image();

    let (chart, selected, components) = if map.is_regular_target() {
        let chart = match options.forced_chart {
            Some(index) => BlowupChart::new(universe, index)?,
            None => BlowupChart::last(universe),
        };
        (chart, None, map.components().to_vec())
    } else {
        let selected = select_chart(map.target_ideal(), options)?;
        let components = match &selected.change {
            Some(change) => change_target_coordinates(map.components(), change),
            None => map.components().to_vec(),
        };
        (selected.chart.clone(), Some(selected), components)
    };

    let e = chart.exceptional_index();
    let z_e = Polynomial::var(&chart_universe, e);
    let components: Vec<Polynomial> = components
        .iter()
        .map(|f| f.rename_universe(&chart_universe))
        .collect();

    let mut gens: Vec<Polynomial> = map
        .source_ideal()
        .gen_polys()
        .iter()
        .map(|p| p.rename_universe(&chart_universe))
        .collect();
    if let Some(selected) = &selected {
        gens.extend(selected.transform.gen_polys());
    }
    for (f, &bj) in components.iter().zip(&base) {
        if bj == e {
            gens.push(f - &z_e);
        } else {
            let z_j = Polynomial::var(&chart_universe, bj);
            gens.push(f - &(&z_j * &z_e));
        }
    }

    Ok(PullbackData {
        ideal: Submodule::ideal(&chart_universe, gens)?,
        exceptional: z_e,
        components,
        chart: selected,
    })
}

/// Result of the vertical-component test on a pullback ideal.
#[derive(Clone, Debug)]
pub struct VerticalTest {
    /// The pullback with everything over the exceptional divisor removed.
    pub saturated: Submodule,
    /// Division steps the saturation needed.
    pub steps: usize,
    /// A generator of the saturated ideal outside the radical of the
    /// pullback — evidence of a removed component — or `None`.
    pub witness: Option<Polynomial>,
}

/// Saturate the pullback at the exceptional coordinate and look for a
/// generator that the radical of the unsaturated ideal does not absorb.
pub fn vertical_test(ideal: &Submodule, exceptional: &Polynomial) -> Result<VerticalTest> {
    let (saturated, steps) = ideal.saturate(exceptional)?;
    let mut witness = None;
    for g in saturated.gb(&ModuleOrder::standard()).elements() {
        let p = g.component(0);
        if !ideal.radical_contains(p)? {
            witness = Some(p.clone());
            break;
        }
    }
    Ok(VerticalTest { saturated, steps, witness })
}

/// Outcome of an openness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpennessStatus {
    Open,
    NotOpen,
    /// The computation finished but the hypotheses needed to convert its
    /// result into an openness statement were not asserted.
    Inconclusive,
}

impl fmt::Display for OpennessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpennessStatus::Open => write!(f, "Open"),
            OpennessStatus::NotOpen => write!(f, "NotOpen"),
            OpennessStatus::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Hypotheses under which the vertical-component test decides openness:
/// every component of the source has the same dimension, and the target is
/// normal. Both are asserted by the caller, not checked.
#[derive(Clone, Debug, Default)]
pub struct OpennessOptions {
    pub pure_dimensional_source: bool,
    pub normal_target: bool,
    pub chart: ChartSearchOptions,
}

/// Verdict of an openness test, with the data to re-check it.
#[derive(Clone, Debug)]
pub struct OpennessVerdict {
    pub status: OpennessStatus,
    /// Whether a component over the blown-up origin was found.
    pub vertical_found: bool,
    /// For a found component: a saturated-ideal generator outside the
    /// radical of the pullback.
    pub witness: Option<Polynomial>,
    /// The pullback ideal the witness is measured against.
    pub pullback: Submodule,
    /// The saturated pullback.
    pub saturated: Submodule,
    pub saturation_steps: usize,
    /// Chart data when the target is singular.
    pub chart: Option<SelectedChart>,
    pub certificate: String,
}

/// Run the full openness test for a map.
pub fn openness_verdict(
    map: &MapPresentation,
    options: &OpennessOptions,
) -> Result<OpennessVerdict> {
    let data = pullback_ideal(map, &options.chart)?;
    let vertical = vertical_test(&data.ideal, &data.exceptional)?;
    let assumed = options.pure_dimensional_source && options.normal_target;
    let vertical_found = vertical.witness.is_some();
    let (status, certificate) = match (vertical_found, assumed) {
        (false, true) => (
            OpennessStatus::Open,
            "saturating the graph pullback at the exceptional coordinate removes nothing \
             outside its radical, so no component sits over the blown-up origin"
                .to_string(),
        ),
        (true, true) => (
            OpennessStatus::NotOpen,
            "a generator of the saturated graph pullback lies outside the radical of the \
             pullback: a component of it sits over the blown-up origin"
                .to_string(),
        ),
        (false, false) => (
            OpennessStatus::Inconclusive,
            "no component sits over the blown-up origin; concluding openness needs the \
             pure-dimensionality and normality assumptions"
                .to_string(),
        ),
        (true, false) => (
            OpennessStatus::Inconclusive,
            "a component of the graph pullback sits over the blown-up origin; concluding \
             non-openness needs the pure-dimensionality and normality assumptions"
                .to_string(),
        ),
    };
    Ok(OpennessVerdict {
        status,
        vertical_found,
        witness: vertical.witness,
        pullback: data.ideal,
        saturated: vertical.saturated,
        saturation_steps: vertical.steps,
        chart: data.chart,
        certificate,
    })
}
