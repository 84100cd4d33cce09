//! Discrete measure spaces, Orlicz/Musielak integrands, the modular
//! `ρ(f) = Σ Φ(xᵢ, |fᵢ|) μᵢ` and its induced scale family, block averaging
//! with the Jensen bound, and translation moduli on grids.
//!
//! Everything is a weighted finite sum; there is no continuum integration.

pub mod kr;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::modular::{Claims, ModularFamily};
use crate::space::PointSpace;
use crate::xreal::XReal;

/// Regular grid layout for cells: `shape = (nx, ny)` with `ny = 1` for 1-D,
/// cell centers at `((ix+1/2)·mesh, (iy+1/2)·mesh)`.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridSpec {
    pub shape: (usize, usize),
    pub mesh: f64,
}

/// Finitely many cells with positive masses, optionally laid out on a grid.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiscreteMeasureSpace {
    masses: Vec<f64>,
    grid: Option<GridSpec>,
    total: f64,
}

impl DiscreteMeasureSpace {
    pub fn from_masses(masses: Vec<f64>) -> Result<DiscreteMeasureSpace> {
        if masses.is_empty() {
            return Err(CoreError::Domain("measure space needs at least one cell".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(CoreError::Domain("all cell masses must be positive finite reals".into()));
        }
        let total = masses.iter().sum();
        Ok(DiscreteMeasureSpace { masses, grid: None, total })
    }

    /// `n` cells of mass `mesh` on a 1-D grid.
    pub fn grid_1d(n: usize, mesh: f64) -> Result<DiscreteMeasureSpace> {
        if n == 0 || !(mesh > 0.0) || !mesh.is_finite() {
            return Err(CoreError::Domain("grid_1d needs n >= 1 and a positive mesh".into()));
        }
        let mut s = DiscreteMeasureSpace::from_masses(alloc::vec![mesh; n])?;
        s.grid = Some(GridSpec { shape: (n, 1), mesh });
        Ok(s)
    }

    /// `nx × ny` cells of mass `mesh²` on a 2-D grid.
    pub fn grid_2d(nx: usize, ny: usize, mesh: f64) -> Result<DiscreteMeasureSpace> {
        if nx == 0 || ny == 0 || !(mesh > 0.0) || !mesh.is_finite() {
            return Err(CoreError::Domain("grid_2d needs nx, ny >= 1 and a positive mesh".into()));
        }
        let mut s = DiscreteMeasureSpace::from_masses(alloc::vec![mesh * mesh; nx * ny])?;
        s.grid = Some(GridSpec { shape: (nx, ny), mesh });
        Ok(s)
    }

    /// Replaces the masses (cell count must be preserved).
    pub fn with_masses(mut self, masses: Vec<f64>) -> Result<DiscreteMeasureSpace> {
        if masses.len() != self.masses.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.masses.len(),
                got: masses.len(),
            });
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(CoreError::Domain("all cell masses must be positive finite reals".into()));
        }
        self.total = masses.iter().sum();
        self.masses = masses;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.masses[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn grid(&self) -> Option<GridSpec> {
        self.grid
    }

    pub fn equal_masses(&self) -> bool {
        self.masses.iter().all(|&m| m == self.masses[0])
    }

    /// Cell-center coordinates when the space carries a grid.
    pub fn position(&self, i: usize) -> Option<(f64, f64)> {
        self.grid.map(|g| {
            let (ix, iy) = (i % g.shape.0, i / g.shape.0);
            ((ix as f64 + 0.5) * g.mesh, (iy as f64 + 0.5) * g.mesh)
        })
    }

    /// Index of the cell offset by `(dx, dy)` grid steps, `None` outside.
    pub fn shifted_index(&self, i: usize, shift: (i64, i64)) -> Option<usize> {
        let g = self.grid?;
        let (nx, ny) = (g.shape.0 as i64, g.shape.1 as i64);
        let (ix, iy) = ((i % g.shape.0) as i64, (i / g.shape.0) as i64);
        let (tx, ty) = (ix + shift.0, iy + shift.1);
        if tx < 0 || tx >= nx || ty < 0 || ty >= ny {
            None
        } else {
            Some((ty * nx + tx) as usize)
        }
    }
}

type IntegrandFn = dyn Fn(usize, f64) -> f64 + Send + Sync;

/// Carathéodory integrand `Φ(x, t)`: zero at `t = 0`, nondecreasing in `t`,
/// convex in `t` when tagged.
#[derive(Clone)]
pub struct Integrand {
    eval: Arc<IntegrandFn>,
    pub convex_in_t: bool,
    /// Δ₂-at-infinity tag; false marks growth too fast for doubling bounds.
    pub delta2: bool,
    name: String,
}

impl core::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("convex_in_t", &self.convex_in_t)
            .field("delta2", &self.delta2)
            .finish()
    }
}

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        convex_in_t: bool,
        delta2: bool,
        eval: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Integrand {
        Integrand { eval: Arc::new(eval), convex_in_t, delta2, name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, cell: usize, t: f64) -> f64 {
        debug_assert!(t >= 0.0, "integrand argument must be nonnegative");
        (self.eval)(cell, t)
    }

    /// `Φ(t) = t^p`, `p >= 1` (rejected below 1: convexity).
    pub fn lp(p: f64) -> Result<Integrand> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(CoreError::Domain(alloc::format!(
                "lp integrand needs p >= 1, got {p}"
            )));
        }
        Ok(Integrand::new(alloc::format!("lp({p})"), true, true, move |_, t| {
            math::powf(t, p)
        }))
    }

    /// `Φ(t) = e^(t²) - 1`; convex, Δ₂ fails at infinity.
    pub fn exp_squared() -> Integrand {
        Integrand::new("exp_squared", true, false, |_, t| math::exp(t * t) - 1.0)
    }

    /// `Φ(x, t) = t^(p(x))` with every exponent in `(1, ∞)`.
    pub fn variable_exponent(exponents: Vec<f64>) -> Result<Integrand> {
        if exponents.is_empty() {
            return Err(CoreError::Domain("variable exponent list must be nonempty".into()));
        }
        if exponents.iter().any(|&p| !(p > 1.0) || !p.is_finite()) {
            return Err(CoreError::Domain(
                "variable exponents must be finite and exceed 1".into(),
            ));
        }
        Ok(Integrand::new("variable_exponent", true, true, move |cell, t| {
            math::powf(t, exponents[cell])
        }))
    }

    /// Sampled validation: `Φ(x,0) = 0`, nondecreasing in `t`, and midpoint
    /// convexity when tagged convex.
    pub fn validate(&self, omega: &DiscreteMeasureSpace, t_samples: &[f64]) -> Result<()> {
        let mut ts: Vec<f64> = t_samples.iter().copied().filter(|&t| t >= 0.0).collect();
        ts.sort_by(f64::total_cmp);
        for cell in 0..omega.len() {
            let z = self.eval(cell, 0.0);
            if z != 0.0 {
                return Err(CoreError::Domain(alloc::format!(
                    "integrand not zero at t=0 on cell {cell}: {z}"
                )));
            }
            let mut prev: Option<(f64, f64)> = None;
            for &t in &ts {
                let v = self.eval(cell, t);
                if v.is_nan() || v < 0.0 {
                    return Err(CoreError::Domain(alloc::format!(
                        "integrand value {v} at (cell {cell}, t={t}) outside [0, inf]"
                    )));
                }
                if let Some((pt, pv)) = prev {
                    if v < pv * (1.0 - 1e-12) {
                        return Err(CoreError::Domain(alloc::format!(
                            "integrand decreases on cell {cell} between t={pt} and t={t}"
                        )));
                    }
                }
                prev = Some((t, v));
            }
            if self.convex_in_t {
                for a in 0..ts.len() {
                    for b in (a + 1)..ts.len() {
                        let (x, y) = (ts[a], ts[b]);
                        let mid = self.eval(cell, 0.5 * (x + y));
                        let bound = 0.5 * (self.eval(cell, x) + self.eval(cell, y));
                        if mid.is_finite() && bound.is_finite() && mid > bound + 1e-9 * (1.0 + bound) {
                            return Err(CoreError::Domain(alloc::format!(
                                "integrand tagged convex fails midpoint convexity on cell {cell} at ({x},{y})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Function families: `m` functions sampled on the cells of a shared space.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FunctionFamily {
    rows: Vec<Vec<f64>>,
    width: usize,
}

impl FunctionFamily {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<FunctionFamily> {
        if rows.is_empty() {
            return Err(CoreError::Domain("function family must be nonempty".into()));
        }
        let width = rows[0].len();
        if width == 0 {
            return Err(CoreError::Domain("function vectors must be nonempty".into()));
        }
        for (k, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(CoreError::DimensionMismatch { expected: width, got: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::Domain(alloc::format!("row {k} has a non-finite entry")));
            }
        }
        Ok(FunctionFamily { rows, width })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Disjoint blocks covering all cells.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    cells: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, cells: usize) -> Result<Partition> {
        let mut seen = alloc::vec![false; cells];
        for block in &blocks {
            if block.is_empty() {
                return Err(CoreError::Domain("partition blocks must be nonempty".into()));
            }
            for &c in block {
                if c >= cells {
                    return Err(CoreError::IndexOutOfBounds { index: c, len: cells });
                }
                if seen[c] {
                    return Err(CoreError::Domain(alloc::format!("cell {c} appears in two blocks")));
                }
                seen[c] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(CoreError::Domain(alloc::format!("cell {missing} is uncovered")));
        }
        Ok(Partition { blocks, cells })
    }

    /// One block per cell (the identity averaging).
    pub fn singletons(cells: usize) -> Partition {
        Partition {
            blocks: (0..cells).map(|c| alloc::vec![c]).collect(),
            cells,
        }
    }

    /// Contiguous 1-D chunks, sized as evenly as integer boundaries allow.
    pub fn contiguous(cells: usize, blocks: usize) -> Result<Partition> {
        if blocks == 0 || blocks > cells {
            return Err(CoreError::Domain(alloc::format!(
                "need 1 <= blocks <= cells, got {blocks} blocks over {cells} cells"
            )));
        }
        let mut out = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let lo = b * cells / blocks;
            let hi = (b + 1) * cells / blocks;
            out.push((lo..hi).collect());
        }
        Partition::new(out, cells)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn block_masses(&self, omega: &DiscreteMeasureSpace) -> Result<Vec<f64>> {
        if omega.len() != self.cells {
            return Err(CoreError::DimensionMismatch { expected: self.cells, got: omega.len() });
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&c| omega.mass(c)).sum())
            .collect())
    }

    /// True when every block of `finer` lies inside a single block of `self`.
    pub fn refines(&self, finer: &Partition) -> bool {
        if self.cells != finer.cells {
            return false;
        }
        let mut owner = alloc::vec![usize::MAX; self.cells];
        for (bi, block) in self.blocks.iter().enumerate() {
            for &c in block {
                owner[c] = bi;
            }
        }
        finer
            .blocks
            .iter()
            .all(|block| block.iter().all(|&c| owner[c] == owner[block[0]]))
    }
}

/// `ρ(f) = Σᵢ Φ(xᵢ, |fᵢ|) μᵢ`.
pub fn rho(f: &[f64], phi: &Integrand, omega: &DiscreteMeasureSpace) -> Result<XReal> {
    if f.len() != omega.len() {
        return Err(CoreError::DimensionMismatch { expected: omega.len(), got: f.len() });
    }
    let mut acc = 0.0f64;
    for (i, &v) in f.iter().enumerate() {
        acc += phi.eval(i, math::abs(v)) * omega.mass(i);
        if acc.is_infinite() {
            return Ok(XReal::INFINITY);
        }
    }
    Ok(XReal::from_eval(acc))
}

/// The scale family `w(λ, i, j) = ρ((uᵢ - uⱼ)/λ)` over registered function
/// vectors. Claims convexity exactly when the integrand is tagged convex.
pub fn induced_modular(
    phi: &Integrand,
    omega: &DiscreteMeasureSpace,
    vectors: Vec<Vec<f64>>,
) -> Result<ModularFamily> {
    let family = FunctionFamily::new(vectors)?;
    if family.width() != omega.len() {
        return Err(CoreError::DimensionMismatch { expected: omega.len(), got: family.width() });
    }
    // strictness sampled: Φ positive at a few positive arguments on all cells
    let strict = (0..omega.len())
        .all(|c| [1e-6, 1.0, 1e3].iter().all(|&t| phi.eval(c, t) > 0.0));
    let claims = Claims {
        strict,
        convex: phi.convex_in_t,
        delta2_expected: Some(phi.delta2),
    };
    let space = PointSpace::new((0..family.len()).map(|k| alloc::format!("f{k}")).collect());
    let phi = phi.clone();
    let omega = omega.clone();
    Ok(ModularFamily::new(space, "orlicz", claims, move |l, i, j| {
        let (u, v) = (family.row(i), family.row(j));
        let mut acc = 0.0f64;
        for c in 0..omega.len() {
            acc += phi.eval(c, math::abs(u[c] - v[c]) / l) * omega.mass(c);
            if acc.is_infinite() {
                return XReal::INFINITY;
            }
        }
        XReal::from_eval(acc)
    }))
}

/// Block-wise μ-weighted mean projection `Pu`.
pub fn averaging(u: &[f64], p: &Partition, omega: &DiscreteMeasureSpace) -> Result<Vec<f64>> {
    if u.len() != omega.len() {
        return Err(CoreError::DimensionMismatch { expected: omega.len(), got: u.len() });
    }
    if p.cells() != omega.len() {
        return Err(CoreError::DimensionMismatch { expected: omega.len(), got: p.cells() });
    }
    let mut out = alloc::vec![0.0f64; u.len()];
    for block in p.blocks() {
        let mass: f64 = block.iter().map(|&c| omega.mass(c)).sum();
        let mean: f64 = block.iter().map(|&c| u[c] * omega.mass(c)).sum::<f64>() / mass;
        for &c in block {
            out[c] = mean;
        }
    }
    Ok(out)
}

/// Left side `ρ((u - Pu)/λ)` and the Jensen double-average bound
/// `Σᵢ μ(Qᵢ)⁻¹ Σ_{x,z ∈ Qᵢ} Φ(x, |u(x)-u(z)|/λ) μ(z) μ(x)`.
/// Contract: `lhs <= rhs + tol` for convex integrands.
pub fn jensen_gap(
    u: &[f64],
    p: &Partition,
    phi: &Integrand,
    omega: &DiscreteMeasureSpace,
    lambda: f64,
) -> Result<(XReal, XReal)> {
    if !phi.convex_in_t {
        return Err(CoreError::NonConvexIntegrand);
    }
    if !(lambda > 0.0) {
        return Err(CoreError::Domain(alloc::format!("lambda must be positive, got {lambda}")));
    }
    let pu = averaging(u, p, omega)?;
    let diff: Vec<f64> = u.iter().zip(pu.iter()).map(|(a, b)| a - b).collect();
    let lhs = rho(&diff.iter().map(|d| d / lambda).collect::<Vec<_>>(), phi, omega)?;

    let mut rhs = 0.0f64;
    for block in p.blocks() {
        let mass: f64 = block.iter().map(|&c| omega.mass(c)).sum();
        let mut inner = 0.0f64;
        for &x in block {
            for &z in block {
                inner += phi.eval(x, math::abs(u[x] - u[z]) / lambda) * omega.mass(z) * omega.mass(x);
            }
        }
        rhs += inner / mass;
        if rhs.is_infinite() {
            return Ok((lhs, XReal::INFINITY));
        }
    }
    Ok((lhs, XReal::from_eval(rhs)))
}

/// ρ-style translation sum `Σ Φ(x, |u(x) - u(x+y)|/λ) μ(x)` with
/// zero-extension outside the grid.
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TranslationModulus {
    pub value: XReal,
    /// Cells whose shifted partner fell outside the grid.
    pub boundary_cells: usize,
    /// Set when no cell had an in-grid partner (shift at least grid-sized).
    pub all_boundary: bool,
}

pub fn translation_modulus(
    u: &[f64],
    omega: &DiscreteMeasureSpace,
    shift: (i64, i64),
    lambda: f64,
    phi: &Integrand,
) -> Result<TranslationModulus> {
    if omega.grid().is_none() {
        return Err(CoreError::Domain("translation modulus needs grid positions".into()));
    }
    if u.len() != omega.len() {
        return Err(CoreError::DimensionMismatch { expected: omega.len(), got: u.len() });
    }
    if !(lambda > 0.0) {
        return Err(CoreError::Domain(alloc::format!("lambda must be positive, got {lambda}")));
    }
    let mut acc = 0.0f64;
    let mut boundary = 0usize;
    for i in 0..omega.len() {
        let partner = match omega.shifted_index(i, shift) {
            Some(t) => u[t],
            None => {
                boundary += 1;
                0.0
            }
        };
        acc += phi.eval(i, math::abs(u[i] - partner) / lambda) * omega.mass(i);
    }
    Ok(TranslationModulus {
        value: XReal::from_eval(acc),
        boundary_cells: boundary,
        all_boundary: boundary == omega.len(),
    })
}
