//! Explicit constructions for every catalog code.
//!
//! Coordinates come from closed forms: trigonometric for the N-gon,
//! golden-ratio orbits for the icosahedral family and the 600-cell,
//! sign/permutation patterns for the E8 shell, Golay codewords for the
//! 22- and 23-dimensional family and the Leech shell. Derived codes
//! (kissing selections) are cut in the ambient space and then rotated
//! into their own dimension, so witness points ride along through the
//! same reflections.

use super::{dot, normalize, reduce_points, SphericalCode, WitnessRole};
use crate::error::{Error, Result};
use crate::golay;
use crate::quadrature::IndexSet;

const PHI: f64 = 1.618033988749894848204586834365638118;

pub(super) fn build(name: &str) -> Result<SphericalCode> {
    if let Some(arg) = parse_parametric(name, "ngon") {
        return ngon(arg?);
    }
    if let Some(arg) = parse_parametric(name, "simplex") {
        return simplex(arg?);
    }
    if let Some(arg) = parse_parametric(name, "cross_polytope") {
        return cross_polytope(arg?);
    }
    match name {
        "cube" => cube(),
        "icosahedron" => icosahedron(),
        "dodecahedron" => dodecahedron(),
        "c_5_16_3" => c_5_16_3(),
        "c_6_27_4" => c_6_27_4(),
        "c_7_56_5" => c_7_56_5(),
        "e8_240" => e8_240(),
        "c_21_112_3" => mclaughlin_subconstituent(First),
        "c_21_162_3" => mclaughlin_subconstituent(Second),
        "c_22_100_3" => c_22_100_3(),
        "c_22_275_4" => c_22_275_4(),
        "c_22_891_5" => c_22_891_5(),
        "c_23_552_5" => c_23_552_5(),
        "c_23_4600_7" => c_23_4600_7(),
        "leech_196560" => leech_196560(),
        "cell_600" => cell_600(),
        _ => Err(Error::UnknownCode(name.to_string())),
    }
}

fn parse_parametric(name: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = name.strip_prefix(prefix)?;
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    Some(
        inner
            .parse::<usize>()
            .map_err(|_| Error::UnknownCode(name.to_string())),
    )
}

struct Pieces {
    witnesses: Vec<(WitnessRole, Vec<f64>)>,
    unsupported: Vec<(WitnessRole, String)>,
}

impl Pieces {
    fn new() -> Self {
        Pieces {
            witnesses: Vec::new(),
            unsupported: Vec::new(),
        }
    }

    fn with(mut self, role: WitnessRole, w: Vec<f64>) -> Self {
        self.witnesses.push((role, w));
        self
    }

    fn without(mut self, role: WitnessRole, reason: &str) -> Self {
        self.unsupported.push((role, reason.to_string()));
        self
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    name: &str,
    n: usize,
    points: Vec<Vec<f64>>,
    strength: usize,
    design_degrees: IndexSet,
    spectrum: Vec<f64>,
    second_level_k: Option<usize>,
    pieces: Pieces,
) -> SphericalCode {
    SphericalCode {
        name: name.to_string(),
        n,
        points,
        strength,
        design_degrees,
        expected_inner_products: spectrum,
        second_level_k,
        witnesses: pieces.witnesses,
        unsupported: pieces.unsupported,
    }
}

const NOT_SHARP: &str = "not a sharp code; no universal minimum certified at this level";
const NONINTEGER: &str =
    "the rule multiplicities N*rho are not integers, so the first-level bound cannot be attained";

// --- circle, simplex, cross-polytope, cube ------------------------------

fn ngon(num: usize) -> Result<SphericalCode> {
    if num < 2 {
        return Err(Error::InvalidArgument(
            "ngon needs at least 2 points".into(),
        ));
    }
    let angle = |j: f64| 2.0 * std::f64::consts::PI * j / num as f64;
    let points: Vec<Vec<f64>> = (0..num)
        .map(|j| vec![angle(j as f64).cos(), angle(j as f64).sin()])
        .collect();
    let spectrum: Vec<f64> = {
        let mut v: Vec<f64> = (1..=num / 2).map(|j| angle(j as f64).cos()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        v
    };
    // Mid-point of the first arc attains the case (i) bound; the code
    // points themselves attain case (ii).
    let mid = std::f64::consts::PI / num as f64;
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, vec![mid.cos(), mid.sin()])
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        &format!("ngon({num})"),
        2,
        points,
        num - 1,
        IndexSet::range(1, num - 1),
        spectrum,
        None,
        pieces,
    ))
}

fn simplex(n: usize) -> Result<SphericalCode> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "simplex needs dimension >= 2".into(),
        ));
    }
    // Vertices of the regular simplex: e_i in R^{n+1} recentered and
    // normalized, then rotated into R^n (everything is orthogonal to the
    // all-ones direction).
    let dim = n + 1;
    let center = 1.0 / dim as f64;
    let scale = ((dim as f64 - 1.0) / dim as f64).sqrt();
    let ambient: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| ((if i == j { 1.0 } else { 0.0 }) - center) / scale)
                .collect()
        })
        .collect();
    let axis: Vec<f64> = vec![1.0 / (dim as f64).sqrt(); dim];
    let points = reduce_points(&ambient, &axis);
    let anti: Vec<f64> = points[0].iter().map(|x| -x).collect();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, anti)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        &format!("simplex({n})"),
        n,
        points,
        2,
        IndexSet::range(1, 2),
        vec![-1.0 / n as f64],
        None,
        pieces,
    ))
}

fn cross_polytope(n: usize) -> Result<SphericalCode> {
    if n < 2 {
        return Err(Error::InvalidArgument("cross-polytope needs n >= 2".into()));
    }
    let mut points = Vec::with_capacity(2 * n);
    for sign in [1.0, -1.0] {
        for i in 0..n {
            let mut p = vec![0.0; n];
            p[i] = sign;
            points.push(p);
        }
    }
    let diag = vec![1.0 / (n as f64).sqrt(); n];
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, diag)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        &format!("cross_polytope({n})"),
        n,
        points,
        3,
        IndexSet::range(1, 3),
        vec![-1.0, 0.0],
        None,
        pieces,
    ))
}

fn cube() -> Result<SphericalCode> {
    let r = 3.0f64.sqrt();
    let mut points = Vec::with_capacity(8);
    for mask in 0..8u32 {
        points.push(
            (0..3)
                .map(|b| {
                    if mask >> b & 1 == 1 {
                        -1.0 / r
                    } else {
                        1.0 / r
                    }
                })
                .collect(),
        );
    }
    // Face centers attain the case (i) bound; the cube is not sharp, so no
    // case (ii) witness exists.
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, vec![0.0, 0.0, 1.0])
        .without(WitnessRole::CaseII, NOT_SHARP);
    Ok(assemble(
        "cube",
        3,
        points,
        3,
        IndexSet::range(1, 3),
        vec![-1.0, -1.0 / 3.0, 1.0 / 3.0],
        None,
        pieces,
    ))
}

// --- icosahedral family --------------------------------------------------

fn icosahedron_points() -> Vec<Vec<f64>> {
    let r = (1.0 + PHI * PHI).sqrt();
    let mut points = Vec::with_capacity(12);
    for &(s1, s2) in &[(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        points.push(vec![0.0, s1 / r, s2 * PHI / r]);
        points.push(vec![s2 * PHI / r, 0.0, s1 / r]);
        points.push(vec![s1 / r, s2 * PHI / r, 0.0]);
    }
    points
}

/// Triples of vertices with pairwise inner product 1/sqrt5 (the faces).
fn icosahedron_faces(points: &[Vec<f64>]) -> Vec<[usize; 3]> {
    let s5 = 1.0 / 5.0f64.sqrt();
    let mut faces = Vec::with_capacity(20);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (dot(&points[i], &points[j]) - s5).abs() > 1e-9 {
                continue;
            }
            for k in j + 1..points.len() {
                if (dot(&points[i], &points[k]) - s5).abs() <= 1e-9
                    && (dot(&points[j], &points[k]) - s5).abs() <= 1e-9
                {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    faces
}

fn icosahedron() -> Result<SphericalCode> {
    let points = icosahedron_points();
    let faces = icosahedron_faces(&points);
    let f = faces[0];
    let center = normalize(&(0..3).fold(vec![0.0; 3], |acc, m| {
        acc.iter().zip(&points[f[m]]).map(|(a, b)| a + b).collect()
    }));
    let s5 = 1.0 / 5.0f64.sqrt();
    let pieces = Pieces::new()
        .with(WitnessRole::SecondLevel, center)
        .with(WitnessRole::CaseII, points[0].clone())
        .without(WitnessRole::CaseI, NONINTEGER);
    Ok(assemble(
        "icosahedron",
        3,
        points,
        5,
        IndexSet::from_degrees([1, 2, 3, 4, 5, 7, 8]),
        vec![-1.0, -s5, s5],
        Some(3),
        pieces,
    ))
}

fn dodecahedron() -> Result<SphericalCode> {
    let ico = icosahedron_points();
    let faces = icosahedron_faces(&ico);
    let points: Vec<Vec<f64>> = faces
        .iter()
        .map(|f| {
            normalize(&(0..3).fold(vec![0.0; 3], |acc, m| {
                acc.iter().zip(&ico[f[m]]).map(|(a, b)| a + b).collect()
            }))
        })
        .collect();
    let s5 = 5.0f64.sqrt();
    // A face center of the dual is an icosahedron vertex.
    let pieces = Pieces::new()
        .with(WitnessRole::SecondLevel, ico[0].clone())
        .without(WitnessRole::CaseI, NONINTEGER)
        .without(WitnessRole::CaseII, NOT_SHARP);
    Ok(assemble(
        "dodecahedron",
        3,
        points,
        5,
        IndexSet::from_degrees([1, 2, 3, 4, 5, 7, 8]),
        vec![-1.0, -s5 / 3.0, -1.0 / 3.0, 1.0 / 3.0, s5 / 3.0],
        Some(3),
        pieces,
    ))
}

// --- the kissing cap chain (5,16,3) .. (8,240,7) --------------------------

fn c_5_16_3() -> Result<SphericalCode> {
    let s5 = 5.0f64.sqrt();
    let mut points = Vec::with_capacity(16);
    // A: one coordinate ±2/sqrt5, altitude 1/sqrt5.
    for pos in 0..4 {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; 5];
            p[pos] = sign * 2.0 / s5;
            p[4] = 1.0 / s5;
            points.push(p);
        }
    }
    // B: (±1/sqrt5)^4 with an even number of minus signs, altitude -1/sqrt5.
    for mask in 0..16u32 {
        if mask.count_ones() % 2 == 0 {
            let mut p: Vec<f64> = (0..4)
                .map(|b| {
                    if mask >> b & 1 == 1 {
                        -1.0 / s5
                    } else {
                        1.0 / s5
                    }
                })
                .collect();
            p.push(-1.0 / s5);
            points.push(p);
        }
    }
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, vec![0.0, 0.0, 0.0, 0.0, 1.0])
        .without(WitnessRole::CaseII, NONINTEGER);
    Ok(assemble(
        "c_5_16_3",
        5,
        points,
        3,
        IndexSet::range(1, 3),
        vec![-3.0 / 5.0, 1.0 / 5.0],
        None,
        pieces,
    ))
}

fn c_7_56_5() -> Result<SphericalCode> {
    let s3 = 3.0f64.sqrt();
    let s23 = (2.0f64 / 3.0).sqrt();
    let s6 = 6.0f64.sqrt();
    let mut points = Vec::with_capacity(56);
    // A: scaled cross-polytope at altitude 1/sqrt3.
    for pos in 0..6 {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; 7];
            p[pos] = sign * s23;
            p[6] = 1.0 / s3;
            points.push(p);
        }
    }
    // E: (±1/sqrt6)^6 with an even number of minus signs, on the equator.
    for mask in 0..64u32 {
        if mask.count_ones() % 2 == 0 {
            let mut p: Vec<f64> = (0..6)
                .map(|b| {
                    if mask >> b & 1 == 1 {
                        -1.0 / s6
                    } else {
                        1.0 / s6
                    }
                })
                .collect();
            p.push(0.0);
            points.push(p);
        }
    }
    // B: the antipodal cross-polytope at altitude -1/sqrt3.
    for pos in 0..6 {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; 7];
            p[pos] = sign * s23;
            p[6] = -1.0 / s3;
            points.push(p);
        }
    }
    let mut north = vec![0.0; 7];
    north[6] = 1.0;
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, north)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        "c_7_56_5",
        7,
        points,
        5,
        IndexSet::range(1, 5),
        vec![-1.0, -1.0 / 3.0, 1.0 / 3.0],
        None,
        pieces,
    ))
}

fn c_6_27_4() -> Result<SphericalCode> {
    // The 27 nearest neighbors of a point of (7,56,5), rescaled into its
    // tangent hyperplane.
    let parent = c_7_56_5()?;
    let apex = parent.points[0].clone();
    let s = 1.0f64 / 3.0;
    let scale = (1.0 - s * s).sqrt();
    let mut ambient: Vec<Vec<f64>> = Vec::with_capacity(27);
    for (i, p) in parent.points.iter().enumerate() {
        if i != 0 && (dot(p, &apex) - s).abs() <= 1e-9 {
            ambient.push(
                p.iter()
                    .zip(&apex)
                    .map(|(x, a)| (x - s * a) / scale)
                    .collect(),
            );
        }
    }
    let points = reduce_points(&ambient, &apex);
    let anti: Vec<f64> = points[0].iter().map(|x| -x).collect();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, anti)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        "c_6_27_4",
        6,
        points,
        4,
        IndexSet::range(1, 4),
        vec![-0.5, 0.25],
        None,
        pieces,
    ))
}

fn e8_240() -> Result<SphericalCode> {
    let s2 = 2.0f64.sqrt();
    let s8 = 8.0f64.sqrt();
    let mut points = Vec::with_capacity(240);
    // 112 points: two coordinates ±1/sqrt2.
    for i in 0..8 {
        for j in i + 1..8 {
            for &(si, sj) in &[(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut p = vec![0.0; 8];
                p[i] = si / s2;
                p[j] = sj / s2;
                points.push(p);
            }
        }
    }
    // 128 points: (±1/sqrt8)^8 with an even number of minus signs.
    for mask in 0..256u32 {
        if mask.count_ones() % 2 == 0 {
            points.push(
                (0..8)
                    .map(|b| {
                        if mask >> b & 1 == 1 {
                            -1.0 / s8
                        } else {
                            1.0 / s8
                        }
                    })
                    .collect(),
            );
        }
    }
    let mut pole = vec![0.0; 8];
    pole[0] = 1.0;
    let pieces = Pieces::new()
        .with(WitnessRole::SecondLevel, pole)
        .with(WitnessRole::CaseII, points[0].clone())
        .without(WitnessRole::CaseI, NONINTEGER);
    Ok(assemble(
        "e8_240",
        8,
        points,
        7,
        IndexSet::from_degrees([1, 2, 3, 4, 5, 6, 7, 9, 10]),
        vec![-1.0, -0.5, 0.0, 0.5],
        Some(4),
        pieces,
    ))
}

// --- Golay-based family ---------------------------------------------------

/// Higman-Sims configuration (22,100,3): one point c, 77 block points from
/// the weight-7 Golay words starting with 1, 22 coordinate points.
fn c_22_100_3() -> Result<SphericalCode> {
    let s5 = 5.0f64.sqrt();
    let s22 = 22.0f64.sqrt();
    let x = (8.0 * s5 - 1.0) / (11.0 * s22);
    let y = -(3.0 * s5 + 1.0) / (11.0 * s22);
    let z = (4.0 - 21.0 * s5) / (11.0 * s22);
    let u = (4.0 + s5) / (11.0 * s22);

    let heptads = golay::golay_23()?.words_of_weight(7);
    let mut points = Vec::with_capacity(100);
    points.push(vec![-1.0 / s22; 22]);
    // A: 77 words starting with 1, first digit dropped (weight 6 on 22).
    for &w in heptads.iter().filter(|&&w| w & 1 == 1) {
        let mask = w >> 1;
        points.push(
            (0..22)
                .map(|i| if mask >> i & 1 == 1 { x } else { y })
                .collect(),
        );
    }
    // B: one z, twenty-one u.
    for j in 0..22 {
        let mut p = vec![u; 22];
        p[j] = z;
        points.push(p);
    }

    // Extremal point from the first weight-7 word starting with 0.
    let a = (5.0 + 15.0 * s5) / 110.0;
    let b = (5.0 - 7.0 * s5) / 110.0;
    let w0 = heptads.iter().find(|&&w| w & 1 == 0).copied().unwrap() >> 1;
    let witness: Vec<f64> = (0..22)
        .map(|i| if w0 >> i & 1 == 1 { a } else { b })
        .collect();

    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, witness)
        .without(WitnessRole::CaseII, NONINTEGER);
    Ok(assemble(
        "c_22_100_3",
        22,
        points,
        3,
        IndexSet::range(1, 3),
        vec![-4.0 / 11.0, 1.0 / 11.0],
        None,
        pieces,
    ))
}

/// McLaughlin configuration (22,275,4): 22 coordinate points, 77 blocks
/// from the weight-7 words ending in 1 (anchor dropped), 176 blocks from
/// those ending in 0. Inner products are -1/4 between adjacent vertices
/// and 1/6 otherwise.
fn c_22_275_4() -> Result<SphericalCode> {
    let s2 = 2.0f64.sqrt();
    let s30 = 30.0f64.sqrt();
    let x = 2.0 * s30 / 33.0 - s2 / 22.0;
    let y = -s30 / 44.0 - s2 / 22.0;
    let z = 3.0 * s2 / 44.0 + 7.0 * s30 / 44.0;
    let u = 3.0 * s2 / 44.0 - s30 / 132.0;
    let a = -5.0 * s30 / 88.0 + s2 / 88.0;
    let b = 7.0 * s30 / 264.0 + s2 / 88.0;

    let heptads = golay::golay_23()?.words_of_weight(7);
    let mut points = Vec::with_capacity(275);
    for j in 0..22 {
        let mut p = vec![u; 22];
        p[j] = z;
        points.push(p);
    }
    for &w in heptads.iter().filter(|&&w| w >> 22 & 1 == 1) {
        points.push(
            (0..22)
                .map(|i| if w >> i & 1 == 1 { x } else { y })
                .collect(),
        );
    }
    for &w in heptads.iter().filter(|&&w| w >> 22 & 1 == 0) {
        points.push(
            (0..22)
                .map(|i| if w >> i & 1 == 1 { a } else { b })
                .collect(),
        );
    }

    let anti: Vec<f64> = points[0].iter().map(|v| -v).collect();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, anti)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        "c_22_275_4",
        22,
        points,
        4,
        IndexSet::range(1, 4),
        vec![-0.25, 1.0 / 6.0],
        None,
        pieces,
    ))
}

enum Subconstituent {
    First,
    Second,
}
use Subconstituent::{First, Second};

/// The two codes cut out of the McLaughlin configuration around a fixed
/// point: the 112 neighbors (inner product -1/4) and the 162 non-neighbors
/// (inner product 1/6), each recentered into S^20. The extremal direction
/// is the centroid of the common neighbors of the apex and a fixed second
/// point.
fn mclaughlin_subconstituent(which: Subconstituent) -> Result<SphericalCode> {
    let parent = c_22_275_4()?;
    let apex = parent.points[0].clone();
    let mut near = Vec::new(); // inner product -1/4
    let mut far = Vec::new(); // inner product 1/6
    for (i, p) in parent.points.iter().enumerate().skip(1) {
        let t = dot(p, &apex);
        if (t + 0.25).abs() <= 1e-9 {
            near.push(i);
        } else if (t - 1.0 / 6.0).abs() <= 1e-9 {
            far.push(i);
        } else {
            return Err(Error::CodeSelfCheck {
                code: "c_22_275_4".into(),
                check: format!("unexpected inner product {t} from the apex"),
            });
        }
    }
    let (s, own, other, name, spectrum): (f64, _, _, _, _) = match which {
        First => (
            -0.25,
            near.clone(),
            far,
            "c_21_112_3",
            vec![-1.0 / 3.0, 1.0 / 9.0],
        ),
        Second => (
            1.0 / 6.0,
            far,
            near.clone(),
            "c_21_162_3",
            vec![-2.0 / 7.0, 1.0 / 7.0],
        ),
    };
    let scale = (1.0 - s * s).sqrt();
    let derived: Vec<Vec<f64>> = own
        .iter()
        .map(|&i| {
            parent.points[i]
                .iter()
                .zip(&apex)
                .map(|(v, ap)| (v - s * ap) / scale)
                .collect()
        })
        .collect();

    // Fixed second point: the first vertex on the other side of the apex.
    // Its common neighborhood with the apex inside `own` has cardinality
    // 81 (non-adjacent pair in the complement graph) or 56 (adjacent pair),
    // and the centroid of that neighborhood points at the minimum.
    let pivot = &parent.points[other[0]];
    let target = match which {
        First => -0.25,
        Second => 1.0 / 6.0,
    };
    let mut centroid = vec![0.0; 22];
    let mut hits = 0usize;
    for (idx, &i) in own.iter().enumerate() {
        if (dot(&parent.points[i], pivot) - target).abs() <= 1e-9 {
            for (c, v) in centroid.iter_mut().zip(&derived[idx]) {
                *c += v;
            }
            hits += 1;
        }
    }
    let expected_hits = match which {
        First => 56,
        Second => 81,
    };
    if hits != expected_hits {
        return Err(Error::CodeSelfCheck {
            code: name.into(),
            check: format!("{hits} common neighbors, expected {expected_hits}"),
        });
    }
    let witness_ambient = normalize(&centroid);

    let mut all = derived;
    all.push(witness_ambient);
    let mut reduced = reduce_points(&all, &apex);
    let witness = reduced.pop().unwrap();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, witness)
        .without(WitnessRole::CaseII, NONINTEGER);
    Ok(assemble(
        name,
        21,
        reduced,
        3,
        IndexSet::range(1, 3),
        spectrum,
        None,
        pieces,
    ))
}

/// The 276 equiangular lines in R^23: poles plus the lifted McLaughlin
/// configuration and all antipodes.
fn c_23_552_5() -> Result<SphericalCode> {
    let parent = c_22_275_4()?;
    let lift = 2.0 * 6.0f64.sqrt() / 5.0;
    let mut points = Vec::with_capacity(552);
    let mut pole = vec![0.0; 23];
    pole[22] = 1.0;
    points.push(pole);
    for p in &parent.points {
        let mut q: Vec<f64> = p.iter().map(|v| v * lift).collect();
        q.push(0.2);
        points.push(q);
    }
    for i in 0..276 {
        let anti: Vec<f64> = points[i].iter().map(|v| -v).collect();
        points.push(anti);
    }
    let s3 = 3.0f64.sqrt();
    let mut witness = vec![0.2; 23];
    witness[22] = -s3 / 5.0;
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, witness)
        .with(WitnessRole::CaseII, points[0].clone());
    Ok(assemble(
        "c_23_552_5",
        23,
        points,
        5,
        IndexSet::range(1, 5),
        vec![-1.0, -0.2, 0.2],
        None,
        pieces,
    ))
}

// --- Leech family ----------------------------------------------------------

/// The 196560 minimal vectors of the Leech lattice on S^23, built from the
/// extended Golay code and scaled by 1/sqrt32:
///
/// | type | shape            | count              |
/// |------|------------------|--------------------|
/// | 1    | (±4)^2 0^22      | 4 C(24,2)  = 1104  |
/// | 2    | (∓3)^1 (±1)^23   | 24 * 4096  = 98304 |
/// | 3    | (±2)^8 0^16      | 2^7 * 759  = 97152 |
///
/// Type 2 signs follow the 1's of a codeword (+1 on ones, -1 on zeros),
/// with the distinguished coordinate flipped to ∓3. Type 3 puts ±2 on an
/// octad with an even number of minus signs.
fn leech_points() -> Result<Vec<Vec<f64>>> {
    let scale = 1.0 / 32.0f64.sqrt();
    let code = golay::golay_extended()?;
    let mut points = Vec::with_capacity(196560);
    for i in 0..24 {
        for j in i + 1..24 {
            for &(si, sj) in &[(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut p = vec![0.0; 24];
                p[i] = 4.0 * si * scale;
                p[j] = 4.0 * sj * scale;
                points.push(p);
            }
        }
    }
    for &w in &code.codewords {
        for j in 0..24 {
            let mut p: Vec<f64> = (0..24)
                .map(|i| if w >> i & 1 == 1 { scale } else { -scale })
                .collect();
            p[j] *= -3.0;
            points.push(p);
        }
    }
    for &octad in &code.words_of_weight(8) {
        let support: Vec<usize> = (0..24).filter(|&i| octad >> i & 1 == 1).collect();
        for mask in 0..256u32 {
            if mask.count_ones() % 2 == 0 {
                let mut p = vec![0.0; 24];
                for (b, &pos) in support.iter().enumerate() {
                    p[pos] = if mask >> b & 1 == 1 {
                        -2.0 * scale
                    } else {
                        2.0 * scale
                    };
                }
                points.push(p);
            }
        }
    }
    Ok(points)
}

fn leech_196560() -> Result<SphericalCode> {
    let points = leech_points()?;
    let s48 = 48.0f64.sqrt();
    let mut witness = vec![1.0 / s48; 24];
    witness[0] = 5.0 / s48;
    let pieces = Pieces::new()
        .with(WitnessRole::SecondLevel, witness)
        .with(WitnessRole::CaseII, points[0].clone())
        .without(WitnessRole::CaseI, NONINTEGER);
    Ok(assemble(
        "leech_196560",
        24,
        points,
        11,
        IndexSet::from_degrees([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14]),
        vec![-1.0, -0.5, -0.25, 0.0, 0.25, 0.5],
        Some(6),
        pieces,
    ))
}

/// Ambient R^24 coordinates of the (23,4600,7) kissing configuration of the
/// Leech shell around a = [4,4,0,...]/sqrt32, all orthogonal to a.
fn c4600_ambient() -> Result<Vec<Vec<f64>>> {
    let leech = leech_points()?;
    let apex = leech[0].clone(); // [4,4,0,...]/sqrt32 by construction order
    let rescale = 2.0 / 3.0f64.sqrt();
    let mut out = Vec::with_capacity(4600);
    for p in &leech {
        if (dot(p, &apex) - 0.5).abs() <= 1e-9 {
            out.push(
                p.iter()
                    .zip(&apex)
                    .map(|(v, a)| (v - 0.5 * a) * rescale)
                    .collect(),
            );
        }
    }
    if out.len() != 4600 {
        return Err(Error::CodeSelfCheck {
            code: "c_23_4600_7".into(),
            check: format!("{} points at inner product 1/2, expected 4600", out.len()),
        });
    }
    Ok(out)
}

fn c_23_4600_7() -> Result<SphericalCode> {
    let ambient = c4600_ambient()?;
    let leech = leech_points()?;
    let apex = leech[0].clone();
    let s30 = 30.0f64.sqrt();
    let mut witness = vec![1.0 / s30; 24];
    witness[0] = -2.0 / s30;
    witness[1] = 2.0 / s30;

    let mut all = ambient;
    all.push(witness);
    let mut reduced = reduce_points(&all, &apex);
    let witness = reduced.pop().unwrap();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, witness)
        .with(WitnessRole::CaseII, reduced[0].clone());
    Ok(assemble(
        "c_23_4600_7",
        23,
        reduced,
        7,
        IndexSet::range(1, 7),
        vec![-1.0, -1.0 / 3.0, 0.0, 1.0 / 3.0],
        None,
        pieces,
    ))
}

/// (22,891,5): the kissing configuration of (23,4600,7) around
/// b = [-2,2,4,0,...]/sqrt24, cut in the ambient R^24 and rotated down
/// twice.
fn c_22_891_5() -> Result<SphericalCode> {
    let ambient4600 = c4600_ambient()?;
    let leech = leech_points()?;
    let apex = leech[0].clone();
    let s24 = 24.0f64.sqrt();
    let mut b = vec![0.0; 24];
    b[0] = -2.0 / s24;
    b[1] = 2.0 / s24;
    b[2] = 4.0 / s24;

    let rescale = 3.0 / (2.0 * 2.0f64.sqrt());
    let mut selected = Vec::with_capacity(891);
    for p in &ambient4600 {
        if (dot(p, &b) - 1.0 / 3.0).abs() <= 1e-9 {
            selected.push(
                p.iter()
                    .zip(&b)
                    .map(|(v, bb)| (v - bb / 3.0) * rescale)
                    .collect::<Vec<f64>>(),
            );
        }
    }
    if selected.len() != 891 {
        return Err(Error::CodeSelfCheck {
            code: "c_22_891_5".into(),
            check: format!(
                "{} points at inner product 1/3, expected 891",
                selected.len()
            ),
        });
    }
    let witness: Vec<f64> = (0..24)
        .map(|i| {
            if i == 0 || i == 2 {
                -1.0 / s24
            } else {
                1.0 / s24
            }
        })
        .collect();
    selected.push(witness);

    let first = reduce_points(&selected, &apex);
    let b_reduced = drop_axis_single(&b, &apex);
    let mut second = reduce_points(&first, &b_reduced);
    let witness = second.pop().unwrap();
    let pieces = Pieces::new()
        .with(WitnessRole::CaseI, witness)
        .without(WitnessRole::CaseII, NONINTEGER);
    Ok(assemble(
        "c_22_891_5",
        22,
        second,
        5,
        IndexSet::range(1, 5),
        vec![-0.5, -0.125, 0.25],
        None,
        pieces,
    ))
}

fn drop_axis_single(v: &[f64], axis: &[f64]) -> Vec<f64> {
    reduce_points(std::slice::from_ref(&v.to_vec()), axis)
        .pop()
        .unwrap()
}

// --- the 600-cell -----------------------------------------------------------

/// H4 orbit: 8 unit-axis points, 16 half-integer points, and 96 even
/// permutations of (±phi, ±1, ±1/phi, 0)/2.
fn cell_600() -> Result<SphericalCode> {
    const EVEN_PERMS: [[usize; 4]; 12] = [
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
        [1, 0, 3, 2],
        [1, 2, 0, 3],
        [1, 3, 2, 0],
        [2, 0, 1, 3],
        [2, 1, 3, 0],
        [2, 3, 0, 1],
        [3, 0, 2, 1],
        [3, 1, 0, 2],
        [3, 2, 1, 0],
    ];
    let mut points = Vec::with_capacity(120);
    for i in 0..4 {
        for sign in [1.0, -1.0] {
            let mut p = vec![0.0; 4];
            p[i] = sign;
            points.push(p);
        }
    }
    for mask in 0..16u32 {
        points.push(
            (0..4)
                .map(|b| if mask >> b & 1 == 1 { -0.5 } else { 0.5 })
                .collect(),
        );
    }
    let pattern = [PHI / 2.0, 0.5, 1.0 / (2.0 * PHI)];
    for perm in EVEN_PERMS {
        for mask in 0..8u32 {
            let mut p = vec![0.0; 4];
            for m in 0..3 {
                let sign = if mask >> m & 1 == 1 { -1.0 } else { 1.0 };
                p[perm[m]] = sign * pattern[m];
            }
            points.push(p);
        }
    }
    let s5 = 5.0f64.sqrt();
    let spectrum = vec![
        -1.0,
        -(1.0 + s5) / 4.0,
        -0.5,
        (1.0 - s5) / 4.0,
        0.0,
        (s5 - 1.0) / 4.0,
        0.5,
        (1.0 + s5) / 4.0,
    ];
    // The minimum for the admissible kernels sits at the code points.
    let pieces = Pieces::new()
        .with(WitnessRole::CaseII, points[0].clone())
        .without(
            WitnessRole::CaseI,
            "the first-level rule is not attained by the 600-cell; its minimum needs the \
             16-node interpolation rule",
        );
    Ok(assemble(
        "cell_600",
        4,
        points,
        11,
        IndexSet::from_degrees([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 16]),
        spectrum,
        None,
        pieces,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_code;

    fn frequencies(code: &SphericalCode, base: usize) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for (j, p) in code.points.iter().enumerate() {
            if j == base {
                continue;
            }
            let t = dot(&code.points[base], p);
            match out.iter_mut().find(|(v, _)| (*v - t).abs() < 1e-9) {
                Some((_, c)) => *c += 1,
                None => out.push((t, 1)),
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    #[test]
    fn icosahedron_structure() {
        let code = build_code("icosahedron").unwrap();
        assert_eq!(code.cardinality(), 12);
        let freq = frequencies(&code, 0);
        let s5 = 1.0 / 5.0f64.sqrt();
        assert_eq!(freq.len(), 3);
        assert!((freq[0].0 + 1.0).abs() < 1e-12 && freq[0].1 == 1);
        assert!((freq[1].0 + s5).abs() < 1e-12 && freq[1].1 == 5);
        assert!((freq[2].0 - s5).abs() < 1e-12 && freq[2].1 == 5);
        assert_eq!(icosahedron_faces(&code.points).len(), 20);
    }

    #[test]
    fn dodecahedron_structure() {
        let code = build_code("dodecahedron").unwrap();
        assert_eq!(code.cardinality(), 20);
        let freq = frequencies(&code, 7);
        let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![1, 3, 6, 6, 3]);
    }

    #[test]
    fn c16_frequencies() {
        let code = build_code("c_5_16_3").unwrap();
        for base in [0, 5, 11] {
            let freq = frequencies(&code, base);
            assert_eq!(freq.len(), 2);
            assert!((freq[0].0 + 0.6).abs() < 1e-12 && freq[0].1 == 5);
            assert!((freq[1].0 - 0.2).abs() < 1e-12 && freq[1].1 == 10);
        }
    }

    #[test]
    fn c56_frequencies() {
        let code = build_code("c_7_56_5").unwrap();
        let freq = frequencies(&code, 0);
        assert_eq!(freq.len(), 3);
        assert_eq!((freq[0].1, freq[1].1, freq[2].1), (1, 27, 27));
    }

    #[test]
    fn c27_frequencies() {
        let code = build_code("c_6_27_4").unwrap();
        for base in [0, 13] {
            let freq = frequencies(&code, base);
            assert_eq!(freq.len(), 2);
            assert!((freq[0].0 + 0.5).abs() < 1e-9 && freq[0].1 == 10);
            assert!((freq[1].0 - 0.25).abs() < 1e-9 && freq[1].1 == 16);
        }
    }

    #[test]
    fn e8_240_frequencies() {
        let code = build_code("e8_240").unwrap();
        let freq = frequencies(&code, 0);
        let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![1, 56, 126, 56]);
    }

    #[test]
    fn hundred_code_systems() {
        // The defining systems for the coordinate values.
        let s5 = 5.0f64.sqrt();
        let s22 = 22.0f64.sqrt();
        let x = (8.0 * s5 - 1.0) / (11.0 * s22);
        let y = -(3.0 * s5 + 1.0) / (11.0 * s22);
        let z = (4.0 - 21.0 * s5) / (11.0 * s22);
        let u = (4.0 + s5) / (11.0 * s22);
        assert!((12.0 * x * y + 10.0 * y * y + 4.0 / 11.0).abs() < 1e-14);
        assert!((2.0 * x * x + 8.0 * x * y + 12.0 * y * y - 1.0 / 11.0).abs() < 1e-14);
        assert!((6.0 * x * x + 16.0 * y * y - 1.0).abs() < 1e-14);
        assert!((2.0 * z * u + 20.0 * u * u - 1.0 / 11.0).abs() < 1e-14);
        assert!((z * z + 21.0 * u * u - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hundred_code_structure() {
        let code = build_code("c_22_100_3").unwrap();
        assert_eq!(code.cardinality(), 100);
        for base in [0, 1, 90] {
            let freq = frequencies(&code, base);
            assert_eq!(freq.len(), 2);
            assert!((freq[0].0 + 4.0 / 11.0).abs() < 1e-12 && freq[0].1 == 22);
            assert!((freq[1].0 - 1.0 / 11.0).abs() < 1e-12 && freq[1].1 == 77);
        }
        // The witness splits the code into two 50-point halves.
        let w = code.witness_point(WitnessRole::CaseI).unwrap();
        let s22inv = 1.0 / 22.0f64.sqrt();
        let mut low = 0;
        let mut high = 0;
        for p in &code.points {
            let t = dot(w, p);
            if (t + s22inv).abs() < 1e-9 {
                low += 1;
            } else if (t - s22inv).abs() < 1e-9 {
                high += 1;
            }
        }
        assert_eq!((low, high), (50, 50));
    }

    #[test]
    fn mclaughlin_structure() {
        let code = build_code("c_22_275_4").unwrap();
        assert_eq!(code.cardinality(), 275);
        for base in [0, 30, 150] {
            let freq = frequencies(&code, base);
            assert_eq!(freq.len(), 2);
            assert!((freq[0].0 + 0.25).abs() < 1e-12 && freq[0].1 == 112);
            assert!((freq[1].0 - 1.0 / 6.0).abs() < 1e-12 && freq[1].1 == 162);
        }
    }

    #[test]
    fn subconstituent_cardinalities() {
        let c112 = build_code("c_21_112_3").unwrap();
        assert_eq!(c112.cardinality(), 112);
        let freq = frequencies(&c112, 0);
        assert_eq!((freq[0].1, freq[1].1), (30, 81));
        let c162 = build_code("c_21_162_3").unwrap();
        assert_eq!(c162.cardinality(), 162);
        let freq = frequencies(&c162, 0);
        assert_eq!((freq[0].1, freq[1].1), (56, 105));
    }

    #[test]
    fn equiangular_552_structure() {
        let code = build_code("c_23_552_5").unwrap();
        assert_eq!(code.cardinality(), 552);
        let freq = frequencies(&code, 0);
        let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![1, 275, 275]);
    }

    #[test]
    fn leech_counts_and_witness() {
        let code = build_code("leech_196560").unwrap();
        assert_eq!(code.cardinality(), 196560);
        // 1104 + 98304 + 97152.
        let w = code
            .witness_point(WitnessRole::SecondLevel)
            .unwrap()
            .to_vec();
        let mut counts = std::collections::BTreeMap::new();
        for p in &code.points {
            let t = dot(&w, p);
            *counts.entry((t * 1e9).round() as i64).or_insert(0usize) += 1;
        }
        let s6 = 6.0f64.sqrt();
        let expect = [
            (-s6 / 4.0, 552),
            (-s6 / 6.0, 11178),
            (-s6 / 12.0, 48600),
            (0.0, 75900),
            (s6 / 12.0, 48600),
            (s6 / 6.0, 11178),
            (s6 / 4.0, 552),
        ];
        assert_eq!(counts.len(), expect.len());
        for ((key, count), (value, expected)) in counts.iter().zip(expect.iter()) {
            assert_eq!(count, expected);
            assert!((*key as f64 / 1e9 - value).abs() < 1e-8);
        }
    }

    #[test]
    fn c4600_structure() {
        let code = build_code("c_23_4600_7").unwrap();
        assert_eq!(code.cardinality(), 4600);
        let freq = frequencies(&code, 17);
        let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![1, 891, 2816, 891]);
        // Witness distribution 275 / 2025 / 2025 / 275 at ±sqrt5/5, ±sqrt5/15.
        let w = code.witness_point(WitnessRole::CaseI).unwrap().to_vec();
        let mut counts = std::collections::BTreeMap::new();
        for p in &code.points {
            let t = dot(&w, p);
            *counts.entry((t * 1e9).round() as i64).or_insert(0usize) += 1;
        }
        let got: Vec<usize> = counts.values().copied().collect();
        assert_eq!(got, vec![275, 2025, 2025, 275]);
    }

    #[test]
    fn c891_structure() {
        let code = build_code("c_22_891_5").unwrap();
        assert_eq!(code.cardinality(), 891);
        let freq = frequencies(&code, 12);
        let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
        assert_eq!(counts, vec![42, 512, 336]);
        let w = code.witness_point(WitnessRole::CaseI).unwrap().to_vec();
        let mut counts = std::collections::BTreeMap::new();
        for p in &code.points {
            let t = dot(&w, p);
            *counts.entry((t * 1e9).round() as i64).or_insert(0usize) += 1;
        }
        let got: Vec<(i64, usize)> = counts.into_iter().collect();
        let s8 = 8.0f64.sqrt();
        assert_eq!(got.len(), 3);
        assert!((got[0].0 as f64 / 1e9 + 1.0 / s8).abs() < 1e-8);
        assert_eq!(got[0].1, 162);
        assert_eq!(got[1].1, 567);
        assert_eq!(got[2].1, 162);
    }

    #[test]
    fn cell600_frequencies() {
        let code = build_code("cell_600").unwrap();
        assert_eq!(code.cardinality(), 120);
        for base in [0, 9, 60] {
            let freq = frequencies(&code, base);
            let counts: Vec<usize> = freq.iter().map(|&(_, c)| c).collect();
            assert_eq!(counts, vec![1, 12, 20, 12, 30, 12, 20, 12]);
        }
    }

    #[test]
    fn ngon_small() {
        let two = build_code("ngon(2)").unwrap();
        assert_eq!(two.cardinality(), 2);
        assert!((dot(&two.points[0], &two.points[1]) + 1.0).abs() < 1e-15);
        let six = build_code("ngon(6)").unwrap();
        assert_eq!(six.expected_inner_products.len(), 3);
    }
}
