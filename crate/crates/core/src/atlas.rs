//! Exhaustive atlases of width-2 interior polygons and of the polygons that
//! share a prescribed interior polygon.
//!
//! Every polygon of lattice width 2 can be mapped unimodularly into the strip
//! `0 ≤ Y ≤ 2`, where it is determined by the lattice intervals it cuts out
//! of the three rows. Scanning those row descriptors up to the strip
//! symmetries (horizontal translations and shears) and deduplicating by
//! normal form enumerates all width-2 interior polygons up to equivalence.
//! The atlas doubles as a brute-force oracle for the family classification.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{koelman_type, recognize_family, ClassifyError, FamilyTag};
use crate::invariants::{b_pair, scrollar_invariants, InvariantError};
use crate::lattice::{
    convex_hull, lattice_width, normal_form, pt, relax, strip_normalize, LatticeError,
    LatticePoint, LatticePolygon,
};

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("genus bound must be at least 4")]
    GenusBoundTooSmall,
    #[error("the polygon is not an interior polygon")]
    NotInteriorPolygon,
}

/// Row intervals `[a, b]` at `Y = 0, 1, 2` describing a lattice polygon in
/// the width-2 strip. Valid descriptors reproduce themselves as the row scan
/// of the hull of the points they list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StripDescriptor {
    pub rows: [(i64, i64); 3],
}

impl StripDescriptor {
    fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for (y, &(a, b)) in self.rows.iter().enumerate() {
            for x in a..=b {
                out.push(pt(x, y as i64));
            }
        }
        out
    }

    /// Reconstruct the polygon and check that its row scan is exactly this
    /// descriptor; `None` when the intervals are not hull-consistent.
    pub fn polygon(&self) -> Option<LatticePolygon> {
        let hull = convex_hull(&self.points()).ok()?;
        if !hull.is_two_dimensional() {
            return None;
        }
        let mut rows = [(i64::MAX, i64::MIN); 3];
        for lp in hull.lattice_points() {
            let r = &mut rows[lp.point.y as usize];
            r.0 = r.0.min(lp.point.x);
            r.1 = r.1.max(lp.point.x);
        }
        (rows == self.rows).then_some(hull)
    }
}

/// Scan one strip partition: all descriptors with middle row `[0, b1]`,
/// bottom row `[0, b0]`, and top row `[a2, b2]` within the extent bound,
/// subject to the point budget and the two convexity prefilters. Emits
/// deduplicated normal forms.
fn enumerate_partition(
    g_max: i64,
    extent: i64,
    b1: i64,
) -> BTreeMap<LatticePolygon, StripDescriptor> {
    let mut found = BTreeMap::new();
    let budget = g_max - (b1 + 1);
    for b0 in 0..=(budget - 2).min(extent) {
        let n_left = budget - (b0 + 1);
        for n2 in 1..=n_left {
            // right boundary is concave, so b2 ≤ 2·b1 − b0 + 1 once the
            // fractional endpoints are rounded
            let b2_cap = (2 * b1 - b0 + 1).min(extent);
            // left boundary is convex, so a2 ≥ −1 after pinning both lower
            // row starts at 0
            for a2 in -1..=(b2_cap - n2 + 1) {
                let b2 = a2 + n2 - 1;
                let desc = StripDescriptor {
                    rows: [(0, b0), (0, b1), (a2, b2)],
                };
                let Some(gamma) = desc.polygon() else {
                    continue;
                };
                if lattice_width(&gamma).width != 2 {
                    continue;
                }
                match relax(&gamma) {
                    Ok(r) if r.is_lattice => {}
                    _ => continue,
                }
                found.entry(normal_form(&gamma).0).or_insert(desc);
            }
        }
    }
    found
}

fn enumerate_with_extent(g_max: i64, extent: i64) -> Result<Vec<LatticePolygon>, AtlasError> {
    if g_max < 4 {
        return Err(AtlasError::GenusBoundTooSmall);
    }
    // Partitions (one per middle-row length) share nothing; run them on a
    // small thread pool and merge the per-partition maps afterwards.
    let partitions: Vec<i64> = (0..=g_max - 3).collect();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(partitions.len().max(1));
    let mut merged: BTreeMap<LatticePolygon, StripDescriptor> = BTreeMap::new();
    std::thread::scope(|scope| {
        let chunk = partitions.len().div_ceil(workers);
        let handles: Vec<_> = partitions
            .chunks(chunk.max(1))
            .map(|part| {
                scope.spawn(move || {
                    let mut local = BTreeMap::new();
                    for &b1 in part {
                        local.extend(enumerate_partition(g_max, extent, b1));
                    }
                    local
                })
            })
            .collect();
        for handle in handles {
            merged.extend(handle.join().expect("enumeration worker panicked"));
        }
    });
    Ok(merged.into_keys().collect())
}

/// All polygons `Γ` with `lw(Γ) = 2`, `relax(Γ)` a lattice polygon, and at
/// most `g_max` lattice points — each exactly once, as normal forms, in a
/// deterministic order.
pub fn enumerate_width2_interior(g_max: i64) -> Result<Vec<LatticePolygon>, AtlasError> {
    enumerate_with_extent(g_max, default_extent(g_max))
}

/// The X-extent the scan confines row intervals to. The concave right
/// boundary already forces `b2 ≤ 2·g_max − 2`; tests re-run the scan with
/// the bound raised by 2 and check that nothing new appears.
pub fn default_extent(g_max: i64) -> i64 {
    2 * g_max + 4
}

/// Same scan with an explicit extent bound, exposed for the bound-stability
/// check.
pub fn enumerate_width2_interior_bounded(
    g_max: i64,
    extent: i64,
) -> Result<Vec<LatticePolygon>, AtlasError> {
    enumerate_with_extent(g_max, extent)
}

/// All lattice polygons `Δ` with `Γ ⊆ Δ ⊆ relax(Γ)` and
/// `interior_hull(Δ) = Γ`, as literal polygons (no equivalence dedup),
/// sorted. `relax(Γ)` itself is always among them.
pub fn enumerate_delta_with_interior(
    gamma: &LatticePolygon,
) -> Result<Vec<LatticePolygon>, AtlasError> {
    if !gamma.is_two_dimensional() {
        return Err(AtlasError::NotInteriorPolygon);
    }
    let relaxed = relax(gamma)?;
    let Some(outer) = relaxed.as_lattice() else {
        return Err(AtlasError::NotInteriorPolygon);
    };
    let core: Vec<LatticePoint> = gamma.lattice_points().iter().map(|lp| lp.point).collect();
    let free: Vec<LatticePoint> = outer
        .lattice_points()
        .iter()
        .map(|lp| lp.point)
        .filter(|p| !gamma.contains(*p))
        .collect();

    let mut found: BTreeMap<Vec<LatticePoint>, LatticePolygon> = BTreeMap::new();
    // depth-first over subsets of the ring between Γ and relax(Γ); growing
    // the subset can only grow the interior hull, so any interior point
    // outside Γ prunes the whole subtree
    fn search(
        core: &[LatticePoint],
        free: &[LatticePoint],
        next: usize,
        chosen: &mut Vec<LatticePoint>,
        gamma: &LatticePolygon,
        found: &mut BTreeMap<Vec<LatticePoint>, LatticePolygon>,
    ) -> Result<(), AtlasError> {
        let mut pts = core.to_vec();
        pts.extend_from_slice(chosen);
        let delta = convex_hull(&pts)?;
        let interior_ok = match delta.interior_hull()? {
            Some(ih) => {
                if ih.lattice_points().iter().any(|lp| !gamma.contains(lp.point)) {
                    return Ok(()); // prune: supersets only grow the interior
                }
                ih == *gamma
            }
            None => false,
        };
        if interior_ok {
            found
                .entry(delta.vertices().to_vec())
                .or_insert(delta);
        }
        for i in next..free.len() {
            chosen.push(free[i]);
            search(core, free, i + 1, chosen, gamma, found)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut chosen = Vec::new();
    search(&core, &free, 0, &mut chosen, gamma, &mut found)?;
    Ok(found.into_values().collect())
}

/// One atlas entry: the polygon in normal form together with the invariants
/// of the unique curve polygon relaxing it.
#[derive(Debug, Clone, Serialize)]
pub struct AtlasRow {
    pub vertices: Vec<LatticePoint>,
    pub g: i64,
    #[serde(rename = "B")]
    pub b: i64,
    #[serde(rename = "B1")]
    pub b1: i64,
    pub koelman_type: u8,
    pub family: Option<FamilyTag>,
    pub scrollar: Option<[i64; 3]>,
}

impl AtlasRow {
    pub fn csv_header() -> &'static str {
        "vertices;g;B;B1;koelman_type;family;scrollar"
    }

    pub fn to_csv(&self) -> String {
        let verts = self
            .vertices
            .iter()
            .map(|p| format!("({},{})", p.x, p.y))
            .collect::<Vec<_>>()
            .join(" ");
        let family = match self.family {
            Some(tag) => format!("{tag:?}"),
            None => "-".to_string(),
        };
        let scrollar = match self.scrollar {
            Some([e1, e2, e3]) => format!("{e1},{e2},{e3}"),
            None => "-".to_string(),
        };
        format!(
            "{verts};{};{};{};{};{family};{scrollar}",
            self.g, self.b, self.b1, self.koelman_type
        )
    }
}

fn row_for(gamma: &LatticePolygon) -> Result<AtlasRow, AtlasError> {
    let delta = relax(gamma)?
        .as_lattice()
        .ok_or(AtlasError::NotInteriorPolygon)?;
    let (b, b1) = b_pair(&delta)?;
    let g = gamma.lattice_points().len() as i64;
    let (_, strip) = strip_normalize(gamma)?;
    let koelman = koelman_type(&strip)?;
    let family = recognize_family(gamma)?;
    let scrollar = match scrollar_invariants(&delta) {
        Ok(e) => Some(e),
        Err(InvariantError::NotTetragonal | InvariantError::FiveSigmaUnsupported) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(AtlasRow {
        vertices: gamma.vertices().to_vec(),
        g,
        b,
        b1,
        koelman_type: koelman,
        family,
        scrollar,
    })
}

/// The full atlas up to a genus bound, one row per equivalence class.
pub fn atlas_rows(g_max: i64) -> Result<Vec<AtlasRow>, AtlasError> {
    enumerate_width2_interior(g_max)?
        .iter()
        .map(row_for)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub vertices: Vec<LatticePoint>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the family trichotomy over a set of enumerated polygons with a
/// caller-supplied recognizer (the seam used by the verifier self-test).
fn check_trichotomy_with<F>(
    polygons: &[LatticePolygon],
    recognize: F,
) -> Result<VerificationReport, AtlasError>
where
    F: Fn(&LatticePolygon) -> Result<Option<FamilyTag>, ClassifyError>,
{
    let mut violations = Vec::new();
    for gamma in polygons {
        let delta = relax(gamma)?
            .as_lattice()
            .ok_or(AtlasError::NotInteriorPolygon)?;
        let (b, b1) = b_pair(&delta)?;
        let family = recognize(gamma)?;
        let expected_and_actual = match b.cmp(&b1) {
            std::cmp::Ordering::Less => (
                "B < B1 requires a Gamma4k4 member",
                matches!(family, Some(FamilyTag::Gamma4k4 { .. })),
            ),
            std::cmp::Ordering::Equal => (
                "B = B1 requires a Gamma4k5/4k3/4k1 member",
                matches!(
                    family,
                    Some(FamilyTag::Gamma4k5 { .. })
                        | Some(FamilyTag::Gamma4k3 { .. })
                        | Some(FamilyTag::Gamma4k1 { .. })
                ),
            ),
            std::cmp::Ordering::Greater => {
                ("B > B1 requires no family membership", family.is_none())
            }
        };
        if !expected_and_actual.1 {
            violations.push(Violation {
                vertices: gamma.vertices().to_vec(),
                detail: format!(
                    "{} (B={b}, B1={b1}, family={family:?})",
                    expected_and_actual.0
                ),
            });
        }
    }
    Ok(VerificationReport {
        checked: polygons.len(),
        violations,
    })
}

/// Brute-force check of the family trichotomy over the whole atlas: `B < B1`
/// exactly for `Gamma4k4` members, `B = B1` exactly for the other three
/// families, `B > B1` exactly off the families.
pub fn verify_family_trichotomy(g_max: i64) -> Result<VerificationReport, AtlasError> {
    let polygons = enumerate_width2_interior(g_max)?;
    check_trichotomy_with(&polygons, recognize_family)
}

/// Brute-force check of `B + B1 = g − 5` and `−1 ≤ min(B,B1) ≤ max(B,B1)
/// ≤ g − 4` over the whole atlas.
pub fn verify_b_sum(g_max: i64) -> Result<VerificationReport, AtlasError> {
    let polygons = enumerate_width2_interior(g_max)?;
    let mut violations = Vec::new();
    for gamma in &polygons {
        let delta = relax(gamma)?
            .as_lattice()
            .ok_or(AtlasError::NotInteriorPolygon)?;
        let (b, b1) = b_pair(&delta)?;
        let g = gamma.lattice_points().len() as i64;
        if b + b1 != g - 5 {
            violations.push(Violation {
                vertices: gamma.vertices().to_vec(),
                detail: format!("B + B1 = {} but g - 5 = {}", b + b1, g - 5),
            });
        }
        if b.min(b1) < -1 || b.max(b1) > g - 4 {
            violations.push(Violation {
                vertices: gamma.vertices().to_vec(),
                detail: format!("(B, B1) = ({b}, {b1}) outside [-1, {}]", g - 4),
            });
        }
    }
    Ok(VerificationReport {
        checked: polygons.len(),
        violations,
    })
}

#[cfg(test)]
mod tests;
