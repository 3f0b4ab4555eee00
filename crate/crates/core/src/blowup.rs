//! Charts of the blow-up of the base space at the origin.
//!
//! Blowing up the base `A^n` at the origin produces `n` affine charts. On
//! the chart of the `e`-th base variable the substitution is
//! `y_j = z_j * z_e` for `j != e` and `y_e = z_e`; on monomials that is a
//! pure exponent transform (the `e`-th base exponent becomes the total base
//! degree, all other exponents are unchanged), so pulling back along a
//! chart never expands the number of terms.
//!
//! The strict transform of a base ideal removes the exceptional divisor by
//! saturating the pullback at the chart coordinate. A chart is usable for
//! the local criteria downstream exactly when that strict transform passes
//! through the chart origin; [`select_chart`] searches plain charts, small
//! shear changes of coordinates, and finally randomized shears until it
//! finds a usable one.

use crate::error::Error;
use crate::groebner::Submodule;
use crate::poly::{Coeff, Monomial, Polynomial, VarUniverse};
use crate::Result;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// One affine chart of the blow-up of the base at the origin, identified by
/// the index of its exceptional coordinate (a base variable of the
/// universe the chart was built for).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupChart {
    universe: Arc<VarUniverse>,
    exceptional: usize,
}

impl BlowupChart {
    /// Chart of the base variable at `index` (an index into the universe).
    pub fn new(universe: &Arc<VarUniverse>, index: usize) -> Result<Self> {
        if !universe.base_indices().contains(&index) {
            let name = if index < universe.len() {
                universe.name(index).to_owned()
            } else {
                format!("#{index}")
            };
            return Err(Error::VariableOutOfScope {
                name,
                context: "blow-up charts are indexed by base variables",
            });
        }
        Ok(BlowupChart { universe: universe.clone(), exceptional: index })
    }

    /// Chart of the last base variable, the default choice.
    pub fn last(universe: &Arc<VarUniverse>) -> Self {
        let exceptional = universe.last_base().expect("universe has base variables");
        BlowupChart { universe: universe.clone(), exceptional }
    }

    /// Index of the exceptional coordinate within the universe.
    pub fn exceptional_index(&self) -> usize {
        self.exceptional
    }

    /// One-based position of the exceptional coordinate among the base
    /// variables, as used in chart names and reports.
    pub fn position(&self) -> usize {
        self.universe
            .base_indices()
            .iter()
            .position(|&i| i == self.exceptional)
            .expect("validated at construction")
            + 1
    }

    fn pullback_monomial(&self, m: &Monomial) -> Monomial {
        let mut exps = m.exps().to_vec();
        let total: u32 = self.universe.base_indices().iter().map(|&i| m.exp(i)).sum();
        exps[self.exceptional] = total;
        Monomial::from_exps(exps)
    }

    /// Pullback along the chart substitution, staying in the same universe
    /// (variable names are kept). The transform is injective on monomials.
    pub fn pullback_poly(&self, p: &Polynomial) -> Polynomial {
        assert!(
            p.universe().same_as(&self.universe),
            "chart and polynomial use different universes"
        );
        let mut out = Polynomial::zero(&self.universe);
        for (mono, coeff) in p.terms() {
            out = &out
                + &Polynomial::monomial(&self.universe, self.pullback_monomial(mono), coeff.clone());
        }
        out
    }

    /// Pullback of a whole module, generator by generator.
    pub fn pullback_module(&self, m: &Submodule) -> Submodule {
        let gens = m
            .gens()
            .iter()
            .map(|g| g.map_components(|p| self.pullback_poly(p)))
            .collect();
        Submodule::new(&self.universe, m.rank(), gens).expect("pullback keeps rank and universe")
    }
}

impl fmt::Display for BlowupChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chart {}", self.position())
    }
}

/// A shear change of base coordinates `y_j -> y_j + c_j * y_n` directed at
/// the last base variable, which itself stays fixed. Applying it before the
/// blow-up re-aims the last chart; the inverse shear undoes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    constants: Vec<Coeff>,
}

impl CoordinateChange {
    /// A shear with the given constants, one per base variable except the
    /// last.
    pub fn new(constants: Vec<Coeff>) -> Self {
        CoordinateChange { constants }
    }

    pub fn constants(&self) -> &[Coeff] {
        &self.constants
    }

    pub fn is_identity(&self) -> bool {
        self.constants.iter().all(Coeff::is_zero)
    }

    /// The shear with negated constants; applying both is the identity.
    pub fn inverse(&self) -> CoordinateChange {
        CoordinateChange { constants: self.constants.iter().map(|c| -c.clone()).collect() }
    }

    /// Apply the shear to a polynomial in a universe with matching base
    /// arity.
    pub fn apply_poly(&self, p: &Polynomial) -> Result<Polynomial> {
        let universe = p.universe();
        let base = universe.base_indices();
        if base.len() != self.constants.len() + 1 {
            return Err(Error::UniverseMismatch);
        }
        let last = universe.last_base().expect("base arity checked above");
        let y_last = Polynomial::var(universe, last);
        let mut map = std::collections::BTreeMap::new();
        for (&j, c) in base.iter().zip(&self.constants) {
            if !c.is_zero() {
                let image = &Polynomial::var(universe, j)
                    + &y_last.mul_term(&Monomial::one(universe.len()), c);
                map.insert(j, image);
            }
        }
        Ok(p.substitute(&map))
    }

    /// Apply the shear to every generator of a module.
    pub fn apply_module(&self, m: &Submodule) -> Result<Submodule> {
        let gens = m
            .gens()
            .iter()
            .map(|g| g.try_map_components(|p| self.apply_poly(p)))
            .collect::<Result<Vec<_>>>()?;
        Submodule::new(m.universe(), m.rank(), gens)
    }
}

/// Strict transform of a base ideal on a chart: pull the generators back,
/// rename the base to the chart coordinates, and saturate away the
/// exceptional divisor. Returns the transform together with the number of
/// division steps the saturation needed.
pub fn strict_transform(base_ideal: &Submodule, chart: &BlowupChart) -> Result<(Submodule, usize)> {
    if base_ideal.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, found: base_ideal.rank() });
    }
    let universe = base_ideal.universe();
    let base = universe.base_indices();
    for g in base_ideal.gens() {
        for p in g.components() {
            if !p.supported_on(&base) {
                return Err(Error::VariableOutOfScope {
                    name: "fiber variable".into(),
                    context: "strict transforms apply to ideals in the base variables",
                });
            }
        }
    }
    let target = universe.blowup_image();
    let gens: Vec<Polynomial> = base_ideal
        .gen_polys()
        .iter()
        .map(|p| chart.pullback_poly(p).rename_universe(&target))
        .collect();
    let pulled = Submodule::ideal(&target, gens)?;
    let exceptional = Polynomial::var(&target, chart.exceptional_index());
    pulled.saturate(&exceptional)
}

/// Whether the chart is usable at the origin: every reduced-basis generator
/// of the strict transform has zero constant term, so the transformed locus
/// passes through the chart origin.
pub fn chart_proper_at_origin(transform: &Submodule) -> bool {
    transform.vanishes_at_origin()
}

/// Search parameters for [`select_chart`]. The defaults are deterministic.
#[derive(Clone, Debug)]
pub struct ChartSearchOptions {
    /// Randomized shears to try after the deterministic candidates.
    pub random_attempts: usize,
    /// Seed for the randomized shears.
    pub seed: u64,
    /// Restrict the search to the chart at this variable index, with no
    /// shear; failure becomes an error instead of further search.
    pub forced_chart: Option<usize>,
}

impl Default for ChartSearchOptions {
    fn default() -> Self {
        ChartSearchOptions { random_attempts: 25, seed: 0x5eed_cafe, forced_chart: None }
    }
}

/// A usable chart found by [`select_chart`], with the shear that was needed
/// (if any), the strict transform of the base ideal on the chart, and the
/// saturation step count.
#[derive(Clone, Debug)]
pub struct SelectedChart {
    pub chart: BlowupChart,
    pub change: Option<CoordinateChange>,
    pub transform: Submodule,
    pub saturation_steps: usize,
}

/// Find a chart on which the strict transform of `base_ideal` passes
/// through the origin.
///
/// Candidates are tried in a deterministic order: the plain charts from the
/// last base variable down to the first; small integer shears aimed at the
/// last chart; shears computed from the lowest-degree forms of the first few
/// generators (both the grid-searched and the closed-form constants); and
/// finally seeded random shears. The first candidate whose strict transform
/// vanishes at the chart origin wins.
pub fn select_chart(base_ideal: &Submodule, options: &ChartSearchOptions) -> Result<SelectedChart> {
    if base_ideal.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, found: base_ideal.rank() });
    }
    if base_ideal.is_zero_module() {
        return Err(Error::ZeroBaseIdeal);
    }
    let universe = base_ideal.universe().clone();
    let base = universe.base_indices();
    let n = base.len();

    if let Some(index) = options.forced_chart {
        let chart = BlowupChart::new(&universe, index)?;
        let (transform, steps) = strict_transform(base_ideal, &chart)?;
        if chart_proper_at_origin(&transform) {
            return Ok(SelectedChart { chart, change: None, transform, saturation_steps: steps });
        }
        return Err(Error::ImproperChart { exceptional: chart.position() });
    }

    let try_candidate = |chart: BlowupChart,
                         change: Option<CoordinateChange>|
     -> Result<Option<SelectedChart>> {
        let sheared = match &change {
            Some(c) if !c.is_identity() => c.apply_module(base_ideal)?,
            _ => base_ideal.clone(),
        };
        let (transform, steps) = strict_transform(&sheared, &chart)?;
        if chart_proper_at_origin(&transform) {
            let change = change.filter(|c| !c.is_identity());
            return Ok(Some(SelectedChart { chart, change, transform, saturation_steps: steps }));
        }
        Ok(None)
    };

    // Plain charts, last first.
    for &index in base.iter().rev() {
        if let Some(found) = try_candidate(BlowupChart::new(&universe, index)?, None)? {
            return Ok(found);
        }
    }

    let last_chart = || BlowupChart::last(&universe);

    // Small integer shears aimed at the last chart, ordered by how many
    // entries are nonzero and capped to keep the search bounded.
    if n > 1 {
        let mut tried = 0usize;
        for bound in 1..=2i64 {
            let mut grid: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..n - 1 {
                let mut next = Vec::new();
                for prefix in &grid {
                    for v in -bound..=bound {
                        let mut row = prefix.clone();
                        row.push(v);
                        next.push(row);
                    }
                }
                grid = next;
            }
            grid.retain(|row| row.iter().any(|&v| v != 0));
            grid.retain(|row| row.iter().map(|v| v.abs()).max() == Some(bound));
            grid.sort_by_key(|row| {
                (row.iter().filter(|&&v| v != 0).count(), row.clone())
            });
            for row in grid {
                let change = CoordinateChange::new(
                    row.iter().map(|&v| Coeff::from_integer(v.into())).collect(),
                );
                if let Some(found) = try_candidate(last_chart(), Some(change))? {
                    return Ok(found);
                }
                tried += 1;
                if tried >= 200 {
                    break;
                }
            }
            if tried >= 200 {
                break;
            }
        }
    }

    // Shears computed from the lowest-degree forms of the first generators.
    if n > 1 {
        for g in base_ideal.gen_polys().iter().take(5) {
            let form = g.initial_form();
            for constants in [nonvanishing_constants(&form), dominant_term_constants(&form)]
                .into_iter()
                .flatten()
            {
                let change = CoordinateChange::new(constants);
                if let Some(found) = try_candidate(last_chart(), Some(change))? {
                    return Ok(found);
                }
            }
        }
    }

    // Seeded random shears as a last resort.
    if n > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        for _ in 0..options.random_attempts {
            let constants: Vec<Coeff> = (0..n - 1)
                .map(|_| Coeff::from_integer(rng.gen_range(-3i64..=3).into()))
                .collect();
            if constants.iter().all(Coeff::is_zero) {
                continue;
            }
            if let Some(found) = try_candidate(last_chart(), Some(CoordinateChange::new(constants)))?
            {
                return Ok(found);
            }
        }
    }

    Err(Error::NoChartFound)
}

/// Constants `c` with `h(c_1, ..., c_{n-1}, 1) != 0` for a nonzero
/// homogeneous polynomial `h` in the base variables.
///
/// Searches the grid `{1, ..., d + 1}^(n-1)` smallest-first; because
/// setting the last variable to one is injective on the monomials of a
/// homogeneous polynomial, the grid always contains a point where the value
/// is nonzero, so the closed-form [`dominant_term_constants`] fallback is
/// never reached in practice but kept as a second, independent route.
pub fn nonvanishing_constants(h: &Polynomial) -> Result<Vec<Coeff>> {
    let d = validate_form(h)?;
    let universe = h.universe().clone();
    let base = universe.base_indices();
    let n = base.len();
    if n <= 1 {
        return Ok(Vec::new());
    }
    let last = universe.last_base().expect("nonempty base");
    let mut grid: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n - 1 {
        let mut next = Vec::new();
        for prefix in &grid {
            for v in 1..=(d as i64 + 1) {
                let mut row = prefix.clone();
                row.push(v);
                next.push(row);
            }
        }
        grid = next;
    }
    grid.sort_by_key(|row| (row.iter().copied().max().unwrap_or(0), row.clone()));
    for row in grid {
        let mut point = vec![Coeff::zero(); universe.len()];
        for (&j, &v) in base.iter().zip(&row) {
            point[j] = Coeff::from_integer(v.into());
        }
        point[last] = Coeff::one();
        if !h.eval(&point).is_zero() {
            return Ok(row.into_iter().map(|v| Coeff::from_integer(v.into())).collect());
        }
    }
    dominant_term_constants(h)
}

/// Closed-form constants `c` with `h(c_1, ..., c_{n-1}, 1) != 0`: a tower
/// of powers of `D * M` (`D` the number of terms, `M` the largest
/// coefficient ratio) chosen so the lexicographically extreme term of `h`
/// dominates the absolute values of all the others combined.
pub fn dominant_term_constants(h: &Polynomial) -> Result<Vec<Coeff>> {
    let d = validate_form(h)?;
    let universe = h.universe().clone();
    let base = universe.base_indices();
    let n = base.len();
    if n <= 1 {
        return Ok(Vec::new());
    }
    let terms: Vec<(&Monomial, &Coeff)> = h.terms().collect();
    let count = terms.len() as u64;
    if count == 1 {
        return Ok(vec![Coeff::one(); n - 1]);
    }
    let lead = terms
        .iter()
        .max_by(|a, b| {
            let ax: Vec<u32> = base.iter().map(|&i| a.0.exp(i)).collect();
            let bx: Vec<u32> = base.iter().map(|&i| b.0.exp(i)).collect();
            ax.cmp(&bx)
        })
        .expect("nonzero polynomial");
    let lead_abs = lead.1.abs();
    let ratio = terms
        .iter()
        .map(|(_, c)| c.abs() / &lead_abs)
        .max()
        .expect("nonzero polynomial");
    let scale = Coeff::from_integer(count.into()) * ratio;
    // Tower base: the degree, but at least two so the tower actually grows
    // (for linear forms a constant tower would collapse to all ones).
    let tower = d.max(2);
    let mut constants = Vec::with_capacity(n - 1);
    for j in 1..n {
        let mut exp: u64 = 1;
        for _ in 0..2 * (n - j) {
            exp = exp
                .checked_mul(tower)
                .filter(|&e| e < 1 << 22)
                .expect("shear constants would be astronomically large");
        }
        constants.push(rational_pow(&scale, exp - 1));
    }
    Ok(constants)
}

fn validate_form(h: &Polynomial) -> Result<u64> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial("shear constants need a nonzero form"));
    }
    if !h.is_homogeneous() {
        return Err(Error::InhomogeneousInput);
    }
    let base = h.universe().base_indices();
    if !h.supported_on(&base) {
        return Err(Error::VariableOutOfScope {
            name: "fiber variable".into(),
            context: "shear constants are computed from forms in the base variables",
        });
    }
    Ok(h.total_degree().expect("nonzero"))
}

fn rational_pow(c: &Coeff, e: u64) -> Coeff {
    use num_bigint::BigInt;
    use num_traits::pow::Pow;
    let num: BigInt = c.numer().clone().pow(e);
    let den: BigInt = c.denom().clone().pow(e);
    Coeff::new(num, den)
}
