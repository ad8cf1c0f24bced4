//! Chow groups with coefficients on a degree window, as finitely presented
//! abelian groups, and membership in `A^0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::class::{Coord, CycleClass};
use super::differential::differential;
use super::lattice::{coordinates, echelon_basis, kernel, smith, Matrix};
use crate::error::{Error, Result};
use crate::exactfield::irreducibles_of_degree;
use crate::milnor::{CoordKey, FieldRef, KElement, Place};
use crate::premodule::PremoduleInstance;
use crate::schemes::{PointId, SchemeKind, SchemeModel};

/// A finitely generated abelian group `Z^r + sum Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    /// Labels of the generators (window basis of the cycles).
    pub generators: Vec<String>,
    /// Relations, one row per relation, in the generator basis.
    pub relations: Vec<Vec<BigInt>>,
    /// Torsion orders ascending, each dividing the next, then a `0` per free summand.
    pub invariant_factors: Vec<u64>,
    /// Image of each generator in the invariant-factor coordinates.
    pub distinguished: Vec<Vec<i64>>,
}

impl GroupPresentation {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion(&self) -> Vec<u64> {
        self.invariant_factors.iter().copied().filter(|&d| d > 0).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    fn factor_names(&self) -> Vec<String> {
        self.invariant_factors
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect()
    }

    pub fn render(&self) -> String {
        if self.is_trivial() {
            "0".into()
        } else {
            self.factor_names().join(" + ")
        }
    }

    pub fn to_json(&self) -> Value {
        let distinguished: Vec<Value> = self
            .generators
            .iter()
            .zip(&self.distinguished)
            .map(|(g, im)| json!({"generator": g, "image": im}))
            .collect();
        json!({
            "group": self.render(),
            "rank": self.rank(),
            "torsion": self.torsion(),
            "generators": self.generators,
            "invariant_factors": self.factor_names(),
            "distinguished": distinguished,
        })
    }
}

/// One basis element of a window of `C^p`: a cyclic coordinate at a point.
#[derive(Clone, Debug)]
struct Cell {
    point: PointId,
    field: FieldRef,
    key: CoordKey,
    modulus: u64,
}

struct Window {
    cells: Vec<Cell>,
    degree: i64,
}

impl Window {
    fn element(&self, i: usize, cap: u64) -> Result<KElement> {
        let c = &self.cells[i];
        KElement::from_coords(&c.field, self.degree, cap, [(c.key.clone(), 1)])
    }

    fn vector(&self, c: &CycleClass) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); self.cells.len()];
        let mut seen = 0;
        for (i, cell) in self.cells.iter().enumerate() {
            if let Some(Coord::K(x)) = c.get(&cell.point) {
                let v = x.get(&cell.key);
                if v != 0 {
                    out[i] = BigInt::from(v);
                    seen += 1;
                }
            }
        }
        let mut total = 0;
        for x in c.coords().values() {
            total += x.as_k().ok_or_else(|| Error::Invalid("formal coordinate in a window".into()))?.coords().len();
        }
        if total != seen {
            return Err(Error::Invalid("class leaves the degree window".into()));
        }
        Ok(out)
    }

    fn torsion_rows(&self) -> Matrix {
        let n = self.cells.len();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.modulus > 0)
            .map(|(i, c)| {
                let mut row = vec![BigInt::zero(); n];
                row[i] = BigInt::from(c.modulus);
                row
            })
            .collect()
    }
}

fn cell(point: PointId, field: FieldRef, degree: i64, key: CoordKey, cap: u64) -> Option<Cell> {
    let modulus = KElement::zero(&field, degree, cap).modulus(&key)?;
    if modulus == 1 {
        return None;
    }
    Some(Cell {
        point,
        field,
        key,
        modulus,
    })
}

/// Finite places spanning the generic window: degree at most `bound`, plus
/// the removed places.
fn generic_places(x: &SchemeModel, bound: u32) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for d in 1..=bound {
        for pi in irreducibles_of_degree(x.base(), d as usize) {
            out.push(Place::finite(pi)?);
        }
    }
    for v in x.removed() {
        if !v.is_infinite() && !out.contains(v) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

fn window(x: &SchemeModel, inst: &PremoduleInstance, p: usize, n: i64, bound: u32) -> Result<Window> {
    let degree = inst.internal(n - p as i64);
    let cap = inst.cap();
    let mut cells = Vec::new();
    match (x.kind(), p) {
        (SchemeKind::Spec, 0) => {
            let f = FieldRef::Finite(x.base().clone());
            for key in [CoordKey::Int, CoordKey::Const] {
                cells.extend(cell(PointId::Generic, f.clone(), degree, key, cap));
            }
        }
        (SchemeKind::Line { .. }, 0) => {
            let f = FieldRef::Rational(x.base().clone());
            for key in [CoordKey::Int, CoordKey::Const] {
                cells.extend(cell(PointId::Generic, f.clone(), degree, key, cap));
            }
            for v in generic_places(x, bound)? {
                let key = CoordKey::Place(v.poly().expect("finite place").clone());
                cells.extend(cell(PointId::Generic, f.clone(), degree, key, cap));
            }
        }
        (SchemeKind::Line { .. }, 1) => {
            for r in x.points(1, bound)? {
                let f = r.residue.expect("places have residue fields");
                for key in [CoordKey::Int, CoordKey::Const] {
                    cells.extend(cell(r.id.clone(), f.clone(), degree, key, cap));
                }
            }
        }
        (_, p) if p > x.dim() => {
            return Err(Error::CodimOutOfRange {
                p: p as i64,
                dim: x.dim() as i64,
            })
        }
        _ => return Err(Error::Unsupported(format!("cohomology of {} in codimension {p}", x.name()))),
    }
    Ok(Window { cells, degree })
}

/// Rows `d(e_i)` for the basis of `src` in the basis of `dst`.
fn differential_matrix(
    x: &SchemeModel,
    inst: &PremoduleInstance,
    p: usize,
    n: i64,
    src: &Window,
    dst: &Window,
) -> Result<Matrix> {
    let mut rows = Vec::with_capacity(src.cells.len());
    for i in 0..src.cells.len() {
        let c = CycleClass::new(x, inst, p, n)?.with_coord(&src.cells[i].point, &Coord::K(src.element(i, inst.cap())?))?;
        rows.push(dst.vector(&differential(&c)?)?);
    }
    Ok(rows)
}

fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `A^p(X; M)_n` on the window of points of degree at most `bound`.
///
/// The window is exact for lines: every class of `C^0` with support in the
/// window has its image in the window.
pub fn cohomology_window(x: &SchemeModel, inst: &PremoduleInstance, p: usize, n: i64, bound: u32) -> Result<GroupPresentation> {
    if p > x.dim() {
        return Err(Error::CodimOutOfRange {
            p: p as i64,
            dim: x.dim() as i64,
        });
    }
    if bound == 0 {
        return Err(Error::Invalid("degree bound must be at least 1".into()));
    }
    let here = window(x, inst, p, n, bound)?;
    let a = here.cells.len();
    // Cycles: x with d(x) in the torsion of the next window.
    let cycles: Matrix = if p < x.dim() {
        let next = window(x, inst, p + 1, n, bound)?;
        let b = next.cells.len();
        let mut stacked = differential_matrix(x, inst, p, n, &here, &next)?;
        stacked.extend(next.torsion_rows());
        let left = kernel(&transpose(&stacked, b), stacked.len());
        let projected: Matrix = left.into_iter().map(|r| r[..a].to_vec()).collect();
        echelon_basis(&projected, a)
    } else {
        (0..a)
            .map(|i| (0..a).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    };
    let mut boundaries = here.torsion_rows();
    if p > 0 {
        let prev = window(x, inst, p - 1, n, bound)?;
        boundaries.extend(differential_matrix(x, inst, p - 1, n, &prev, &here)?);
    }
    let r = cycles.len();
    let mut relations = Vec::with_capacity(boundaries.len());
    for row in &boundaries {
        let c = coordinates(&cycles, row)
            .ok_or_else(|| Error::Invalid("boundary outside the cycles: d o d is not zero".into()))?;
        relations.push(c);
    }
    let s = smith(&relations, r);
    let mut factors: Vec<(usize, u64)> = Vec::new();
    for j in 0..r {
        let d = match s.diag.get(j) {
            Some(d) => d.to_u64().ok_or(Error::Overflow("invariant factor"))?,
            None => 0,
        };
        if d != 1 {
            factors.push((j, d));
        }
    }
    let generators: Vec<String> = cycles.iter().map(|row| label(&here, row)).collect();
    let distinguished = (0..r)
        .map(|i| {
            factors
                .iter()
                .map(|&(j, d)| {
                    let v = &s.col[i][j];
                    let v = if d > 0 { v.clone() % BigInt::from(d) } else { v.clone() };
                    let v = if v.is_negative() && d > 0 { v + BigInt::from(d) } else { v };
                    v.to_i64().ok_or(Error::Overflow("generator image"))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupPresentation {
        generators,
        relations,
        invariant_factors: factors.iter().map(|&(_, d)| d).collect(),
        distinguished,
    })
}

fn cell_label(c: &Cell) -> String {
    let point = match &c.point {
        PointId::Generic => "generic".to_string(),
        PointId::Place(v) => v.render(),
        other => format!("{other:?}"),
    };
    match &c.key {
        CoordKey::Int => point,
        CoordKey::Const => format!("{point}:const"),
        CoordKey::Place(pi) => format!("{point}:{}", pi.render("t")),
    }
}

fn label(w: &Window, row: &[BigInt]) -> String {
    let parts: Vec<String> = row
        .iter()
        .zip(&w.cells)
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, c)| if v.is_one() { cell_label(c) } else { format!("{v}*{}", cell_label(c)) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Whether a coordinate at the generic point lies in `A^0(X; M)_n`.
pub fn a0_membership(x: &SchemeModel, inst: &PremoduleInstance, n: i64, coord: &Coord) -> Result<bool> {
    let c = CycleClass::new(x, inst, 0, n)?.with_coord(&PointId::Generic, coord)?;
    Ok(differential(&c)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_field;
    use crate::premodule::milnor_instance;
    use crate::schemes::{affine_line, proj_line, spec};

    #[test]
    fn picard_group_of_projective_line() {
        let f3 = make_field(3, 1).unwrap();
        let g = cohomology_window(&proj_line(&f3), &milnor_instance(), 1, 1, 2).unwrap();
        assert_eq!(g.invariant_factors, vec![0]);
        assert_eq!(g.render(), "Z");
    }

    #[test]
    fn affine_line_has_trivial_picard_group() {
        let f3 = make_field(3, 1).unwrap();
        let g = cohomology_window(&affine_line(&f3), &milnor_instance(), 1, 1, 2).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn units_of_a_point() {
        let f5 = make_field(5, 1).unwrap();
        let g = cohomology_window(&spec(&f5), &milnor_instance(), 0, 1, 1).unwrap();
        assert_eq!(g.invariant_factors, vec![4]);
    }
}
