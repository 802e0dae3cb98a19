//! Lattice-character classification: the 42 non-triclinic rows of the
//! Roof/Niggli table, each a linear subspace of G6 named by a combination
//! of boundary cases and special-position conditions, plus the Hosoya
//! boundary conditions of the cubic and primitive-hexagonal types.

use std::sync::LazyLock;

use crate::boundary;
use crate::error::{NiggliError, Result};
use crate::fuzz::Fuzz;
use crate::g6::G6;
use crate::projector::{intersect_cases_and_planes, NumericProjector};
use crate::reduce::reducedness_report;

/// One row of the character table.
#[derive(Debug, Clone)]
pub struct CharacterEntry {
    /// Roof/Niggli symbol, e.g. "44A".
    pub roof_symbol: &'static str,
    /// International Tables lattice character number.
    pub it_character: u32,
    /// Bravais lattice type, e.g. "cP".
    pub bravais: &'static str,
    /// Symbolic subspace, e.g. "(r, r, r, -2r/3, -2r/3, -2r/3)".
    pub subspace_pattern: &'static str,
    /// Generating combination of cases and primed conditions, e.g. "12F2'F'".
    pub generator_expression: &'static str,
    /// Number of free parameters in the pattern.
    pub free_params: usize,
    /// 6 x free_params coefficient matrix of the pattern.
    pub template: Vec<[f64; 6]>,
    /// Projector onto the subspace, built from the generator expression.
    pub projector: NumericProjector,
}

/// Raw table rows: (roof symbol, IT character, Bravais type, pattern,
/// generator expression). A trailing "X'" token names the special-position
/// condition of case X.
const RAW: [(&str, u32, &str, &str, &str); 42] = [
    ("44A", 3, "cP", "(r, r, r, 0, 0, 0)", "12345"),
    ("44C", 1, "cF", "(r, r, r, r, r, r)", "12679ACD"),
    ("44B", 5, "cI", "(r, r, r, -2r/3, -2r/3, -2r/3)", "12F2'F'"),
    ("45A", 11, "tP", "(r, r, s, 0, 0, 0)", "1345"),
    ("45B", 21, "tP", "(r, s, s, 0, 0, 0)", "2345"),
    ("45D", 6, "tI", "(r, r, r, -r+s, -r+s, -2s)", "12FF'"),
    ("45D", 7, "tI", "(r, r, r, -2s, -r+s, -r+s)", "12F2'"),
    ("45C", 15, "tI", "(r, r, s, -r, -r, 0)", "158BF"),
    ("45E", 18, "tI", "(r, s, s, r/2, r, r)", "2ADA'"),
    ("48A", 12, "hP", "(r, r, s, 0, 0, -r)", "134E"),
    ("48B", 22, "hP", "(r, s, s, -s, 0, 0)", "2458"),
    ("49C", 2, "hR", "(r, r, r, s, s, s)", "121'2'"),
    ("49D", 4, "hR", "(r, r, r, -s, -s, -s)", "121'2'"),
    ("49B", 9, "hR", "(r, r, s, r, r, r)", "1679ACD"),
    ("49E", 24, "hR", "(r, s, s, -s+r/3, -2r/3, -2r/3)", "2F2'F'"),
    ("50C", 32, "oP", "(r, s, t, 0, 0, 0)", "345"),
    ("50D", 13, "oC", "(r, r, s, 0, 0, -t)", "134"),
    ("50E", 23, "oC", "(r, s, s, -t, 0, 0)", "245"),
    ("50A", 36, "oC", "(r, s, t, 0, -r, 0)", "35B"),
    ("50B", 38, "oC", "(r, s, t, 0, 0, -r)", "34E"),
    ("50F", 40, "oC", "(r, s, t, -s, 0, 0)", "458"),
    ("51A", 16, "oF", "(r, r, s, -t, -t, -2r+2t)", "1F1'"),
    ("51B", 26, "oF", "(r, s, t, r/2, r, r)", "ADA'"),
    ("52A", 8, "oI", "(r, r, r, -s, -t, -2r+s+t)", "12F"),
    ("52B", 19, "oI", "(r, s, s, t, r, r)", "29C"),
    ("52C", 42, "oI", "(r, s, t, -s, -r, 0)", "58BF"),
    ("53A", 33, "mP", "(r, s, t, 0, -u, 0)", "35"),
    ("53B", 35, "mP", "(r, s, t, -u, 0, 0)", "45"),
    ("53C", 34, "mP", "(r, s, t, 0, 0, -u)", "34"),
    ("55A", 10, "mC", "(r, r, s, t, t, u)", "11'"),
    ("55A", 14, "mC", "(r, r, s, t, t, u)", "11'"),
    ("57B", 17, "mC", "(r, r, s, -t, -u, -2r+t+u)", "1F"),
    ("55B", 20, "mC", "(r, s, s, t, u, u)", "22'"),
    ("55B", 25, "mC", "(r, s, s, t, u, u)", "22'"),
    ("57C", 27, "mC", "(r, s, t, u, r, r)", "9C"),
    ("56A", 28, "mC", "(r, s, t, u, r, 2u)", "AA'"),
    ("56C", 29, "mC", "(r, s, t, u, 2u, r)", "DD'"),
    ("56B", 30, "mC", "(r, s, t, s, u, 2u)", "77'"),
    ("54C", 37, "mC", "(r, s, t, -u, -r, 0)", "5B"),
    ("54A", 39, "mC", "(r, s, t, -u, 0, -r)", "4E"),
    ("54B", 41, "mC", "(r, s, t, -s, -u, 0)", "58"),
    ("57A", 43, "mC", "(r, s, t, -s+u, -r+u, -2u)", "FF'"),
];

const PARAM_LETTERS: [char; 4] = ['r', 's', 't', 'u'];

/// Parses a full pattern like "(r, r, s, -t, -t, -2r+2t)" into a 6-row
/// coefficient matrix over the parameters r, s, t, u (in order of use).
fn parse_pattern(pattern: &str) -> (Vec<[f64; 6]>, usize) {
    let inner = pattern.trim().trim_start_matches('(').trim_end_matches(')');
    let mut rows: Vec<[f64; 4]> = Vec::with_capacity(6);
    for coord in inner.split(',') {
        let text: String = coord.chars().filter(|c| !c.is_whitespace()).collect();
        let mut row = [0.0f64; 4];
        let mut term = String::new();
        let mut terms = Vec::new();
        for (i, ch) in text.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut term));
            }
            term.push(ch);
        }
        terms.push(term);
        for t in terms {
            if t == "0" || t.is_empty() {
                continue;
            }
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1.0, rest.to_string()),
                None => (1.0, t.strip_prefix('+').unwrap_or(&t).to_string()),
            };
            let (body, denom) = match body.split_once('/') {
                Some((b, d)) => (
                    b.to_string(),
                    d.parse::<f64>().expect("pattern denominator"),
                ),
                None => (body, 1.0),
            };
            let letter = body
                .chars()
                .find(|c| PARAM_LETTERS.contains(c))
                .expect("pattern parameter letter");
            let numer: f64 = match body.trim_end_matches(letter) {
                "" => 1.0,
                n => n.parse().expect("pattern coefficient"),
            };
            let param = PARAM_LETTERS.iter().position(|&c| c == letter).unwrap();
            row[param] += sign * numer / denom;
        }
        rows.push(row);
    }
    assert_eq!(rows.len(), 6, "pattern must have six coordinates");
    let n_params = (0..4)
        .filter(|&j| rows.iter().any(|r| r[j] != 0.0))
        .count();
    let template = (0..n_params)
        .map(|j| {
            let mut col = [0.0f64; 6];
            for i in 0..6 {
                col[i] = rows[i][j];
            }
            col
        })
        .collect();
    (template, n_params)
}

/// Splits a generator expression like "12F2'F'" into plain case ids and
/// primed case ids.
fn parse_generator(expr: &str) -> (Vec<char>, Vec<char>) {
    let mut cases = Vec::new();
    let mut primed = Vec::new();
    let chars: Vec<char> = expr.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let id = chars[i];
        if i + 1 < chars.len() && chars[i + 1] == '\'' {
            primed.push(id);
            i += 2;
        } else {
            cases.push(id);
            i += 1;
        }
    }
    (cases, primed)
}

fn build_entry(raw: &(&'static str, u32, &'static str, &'static str, &'static str)) -> CharacterEntry {
    let (roof_symbol, it_character, bravais, subspace_pattern, generator_expression) = *raw;
    let (template, free_params) = parse_pattern(subspace_pattern);
    let (cases, primed_ids) = parse_generator(generator_expression);
    let mut planes: Vec<[i64; 6]> = Vec::new();
    for id in primed_ids {
        let case = boundary::case(id).expect("generator names a known case");
        assert!(
            !case.primed.is_empty(),
            "case {id} has no special-position condition"
        );
        planes.extend(case.primed.iter().copied());
    }
    let projector =
        intersect_cases_and_planes(&cases, &planes).expect("character projector converges");
    CharacterEntry {
        roof_symbol,
        it_character,
        bravais,
        subspace_pattern,
        generator_expression,
        free_params,
        template,
        projector,
    }
}

static TABLE: LazyLock<Vec<CharacterEntry>> =
    LazyLock::new(|| RAW.iter().map(build_entry).collect());

/// All 42 non-triclinic character rows; the triclinic characters 31 and 44
/// fill the interior of the cone and carry no subspace.
pub fn character_table() -> &'static [CharacterEntry] {
    &TABLE
}

/// Looks an entry up by Roof/Niggli symbol; symbols shared by two
/// characters return the lower-numbered row first.
pub fn by_roof_symbol(symbol: &str) -> Vec<&'static CharacterEntry> {
    character_table()
        .iter()
        .filter(|e| e.roof_symbol == symbol)
        .collect()
}

/// Distance from g to the entry's subspace; +infinity when the projection
/// of g is not a valid cell (the subspace meets the cone only outside the
/// physical region around g).
pub fn character_distance(entry: &CharacterEntry, g: &G6) -> f64 {
    let projected = entry.projector.apply(g);
    if !projected.is_valid(1e-9) {
        return f64::INFINITY;
    }
    g.distance(&projected)
}

/// One classification candidate.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub entry: &'static CharacterEntry,
    pub distance: f64,
    /// Projection of the input onto the entry's subspace.
    pub projected: G6,
}

#[derive(Debug)]
pub struct Classification {
    /// All 42 entries ranked by distance, nondecreasing.
    pub ranked: Vec<Candidate>,
    pub tol: f64,
    pub scale: f64,
}

impl Classification {
    /// Candidates within tol * scale.
    pub fn matches(&self) -> &[Candidate] {
        let n = self
            .ranked
            .iter()
            .take_while(|c| c.distance <= self.tol * self.scale)
            .count();
        &self.ranked[..n]
    }
}

/// Ranks every character entry by subspace distance. The input must be
/// Niggli reduced; characters are defined on reduced cells only.
pub fn classify(g: &G6, tol: f64) -> Result<Classification> {
    g.validate(1e-12)?;
    let report = reducedness_report(g, 1e-9);
    if !report.failed.is_empty() {
        return Err(NiggliError::NotReduced(report.failed));
    }
    let mut ranked: Vec<Candidate> = character_table()
        .iter()
        .map(|entry| Candidate {
            entry,
            distance: character_distance(entry, g),
            projected: entry.projector.apply(g),
        })
        .collect();
    // Quantized scale-relative distance first, so roundoff and overall
    // scaling cannot reorder genuine ties; then the most specific subspace
    // (fewest parameters), then the character number.
    let scale = g.scale();
    let quantize = |d: f64| -> i64 {
        if d.is_finite() {
            (d / scale / 1e-12).round() as i64
        } else {
            i64::MAX
        }
    };
    ranked.sort_by_key(|c| {
        (
            quantize(c.distance),
            c.entry.free_params,
            c.entry.it_character,
        )
    });
    Ok(Classification {
        ranked,
        tol,
        scale: g.scale(),
    })
}

/// The six Hosoya boundary conditions, evaluated within tol * scale.
pub fn hosoya_conditions(g: &G6, tol: f64) -> [bool; 6] {
    let fz = Fuzz::for_g6(&g.0, tol);
    let [g1, g2, g3, g4, g5, g6] = g.0;
    [
        fz.eq(2.0 * g1, g5 + g6),
        fz.eq(2.0 * g2, g4 + g6),
        fz.eq(2.0 * g3, g4 + g5),
        fz.eq(g4, g5),
        fz.eq(g5, g6),
        fz.eq(g4, g5 / 2.0),
    ]
}

/// Builds a point of the entry's subspace from parameter values.
pub fn instantiate(entry: &CharacterEntry, params: &[f64]) -> G6 {
    assert_eq!(params.len(), entry.free_params);
    let mut g = [0.0f64; 6];
    for (j, col) in entry.template.iter().enumerate() {
        for i in 0..6 {
            g[i] += params[j] * col[i];
        }
    }
    G6(g)
}

/// Draws a random Niggli-reduced point of the entry's subspace, or None
/// when rejection sampling fails: ascending edge parameters, small angle
/// parameters.
pub fn sample_reduced(
    entry: &CharacterEntry,
    rng: &mut impl rand::Rng,
) -> Option<G6> {
    'outer: for _ in 0..2000 {
        let mut params = vec![0.0f64; entry.free_params];
        // Parameters used in the edge rows g1..g3 get ascending
        // magnitudes; the rest stay small relative to g1.
        let mut edge = vec![false; entry.free_params];
        for (j, col) in entry.template.iter().enumerate() {
            edge[j] = col[..3].iter().any(|&c| c != 0.0);
        }
        let mut base = 1.0 + rng.gen_range(0.0..0.5);
        for j in 0..entry.free_params {
            if edge[j] {
                params[j] = base;
                base += rng.gen_range(0.1..1.0);
            }
        }
        for j in 0..entry.free_params {
            if !edge[j] {
                params[j] = params[0] * rng.gen_range(0.02..0.98);
            }
        }
        let g = instantiate(entry, &params);
        if !g.is_valid(1e-9) {
            continue 'outer;
        }
        if reducedness_report(&g, 1e-9).failed.is_empty() {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projector::projector_dimension;
    use crate::reduce::niggli_reduce;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_shape() {
        let table = character_table();
        assert_eq!(table.len(), 42);
        // Duplicate-subspace pairs are both present.
        assert_eq!(by_roof_symbol("55A").len(), 2);
        assert_eq!(by_roof_symbol("55B").len(), 2);
        assert_eq!(by_roof_symbol("45D").len(), 2);
        // Characters 31 and 44 (triclinic) are absent.
        assert!(table.iter().all(|e| e.it_character != 31 && e.it_character != 44));
    }

    #[test]
    fn known_lookups() {
        let cp = &by_roof_symbol("44A")[0];
        assert_eq!((cp.it_character, cp.bravais), (3, "cP"));
        assert_eq!(cp.generator_expression, "12345");
        let hr = &by_roof_symbol("49B")[0];
        assert_eq!((hr.it_character, hr.bravais), (9, "hR"));
        assert_eq!(hr.subspace_pattern, "(r, r, s, r, r, r)");
        let mc = by_roof_symbol("57A");
        assert_eq!(mc[0].it_character, 43);
        assert_eq!(mc[0].generator_expression, "FF'");
    }

    #[test]
    fn degrees_of_freedom_match_projector_rank() {
        for entry in character_table() {
            let dim = projector_dimension(&entry.projector).unwrap();
            assert_eq!(
                dim, entry.free_params,
                "{} ({}): projector rank {dim} vs {} free parameters",
                entry.roof_symbol, entry.it_character, entry.free_params
            );
        }
    }

    #[test]
    fn template_lies_in_projector_image() {
        // The printed pattern and the generator expression describe the
        // same subspace: template columns are fixed by the projector.
        for entry in character_table() {
            for (j, col) in entry.template.iter().enumerate() {
                let g = G6(*col);
                let image = entry.projector.apply(&g);
                assert!(
                    g.distance(&image) <= 1e-9 * (1.0 + g.norm()),
                    "{} ({}) template column {j} moves under its projector",
                    entry.roof_symbol,
                    entry.it_character
                );
            }
        }
    }

    #[test]
    fn exact_hits() {
        let cp = &by_roof_symbol("44A")[0];
        assert!(character_distance(cp, &G6([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])) <= 1e-12);
        let cf = &by_roof_symbol("44C")[0];
        assert!(character_distance(cf, &G6([1.0; 6])) <= 1e-12);
        let ci = &by_roof_symbol("44B")[0];
        let bcc = G6([3.0, 3.0, 3.0, -2.0, -2.0, -2.0]);
        assert!(character_distance(ci, &bcc) <= 1e-9);
    }

    #[test]
    fn classify_known_cells() {
        let c = classify(&G6([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]), 1e-6).unwrap();
        assert_eq!(c.ranked[0].entry.bravais, "cP");
        assert!(c.ranked[0].distance <= 1e-12);

        let c = classify(&G6([1.0, 1.0, 2.0, 1.0, 1.0, 1.0]), 1e-6).unwrap();
        assert_eq!(c.ranked[0].entry.it_character, 9);
        assert_eq!(c.ranked[0].entry.bravais, "hR");
    }

    #[test]
    fn generic_cell_is_triclinic() {
        let g = G6([1.0, 1.7, 2.9, -0.2, -0.4, -0.1]);
        let c = classify(&g, 1e-6).unwrap();
        assert!(c.matches().is_empty());
    }

    #[test]
    fn unreduced_input_rejected() {
        let err = classify(&G6([2.0, 1.0, 3.0, 0.1, 0.1, 0.1]), 1e-6).unwrap_err();
        assert!(matches!(err, NiggliError::NotReduced(_)));
    }

    #[test]
    fn hosoya_examples() {
        assert_eq!(
            hosoya_conditions(&G6([1.0; 6]), 1e-9),
            [true, true, true, true, true, false]
        );
        assert_eq!(
            hosoya_conditions(&G6([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]), 1e-9),
            [false, false, false, true, true, true]
        );
    }

    #[test]
    fn scaling_invariance() {
        let g = G6([1.0, 1.0, 2.0, 1.0, 1.0, 1.0]);
        let a = classify(&g, 1e-6).unwrap();
        let b = classify(&g.scaled(137.0), 1e-6).unwrap();
        let ids_a: Vec<u32> = a.ranked.iter().map(|c| c.entry.it_character).collect();
        let ids_b: Vec<u32> = b.ranked.iter().map(|c| c.entry.it_character).collect();
        assert_eq!(ids_a, ids_b);
    }

    #[test]
    fn synthetic_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for entry in character_table() {
            let mut produced = 0;
            for _ in 0..20 {
                let Some(g) = sample_reduced(entry, &mut rng) else {
                    break;
                };
                produced += 1;
                let reduced = niggli_reduce(&g, 1e-12).unwrap().reduced;
                let c = classify(&reduced, 1e-6).unwrap();
                let best = &c.ranked[0];
                assert!(
                    best.distance <= 1e-9 * reduced.scale(),
                    "{} ({}): nearest distance {}",
                    entry.roof_symbol,
                    entry.it_character,
                    best.distance
                );
                // The generating subspace itself is among the matches.
                let self_dist = character_distance(entry, &reduced);
                assert!(
                    self_dist <= 1e-9 * reduced.scale(),
                    "{} ({}): self distance {self_dist}",
                    entry.roof_symbol,
                    entry.it_character
                );
            }
            assert!(
                produced > 0,
                "{} ({}): no reduced sample found",
                entry.roof_symbol,
                entry.it_character
            );
        }
    }

    #[test]
    fn hr_projector_from_alternate_presentations() {
        let hr = &by_roof_symbol("49B")[0];
        // Presentations whose equalities alone pin the line; presentations
        // like 6D rely on inequality-forced collapse, which a product of
        // hyperplane projectors cannot express.
        for presentation in [
            "1679", "167A", "167C", "19CD", "19AC", "19AD", "679A", "167D", "69AC", "1679ACD",
        ] {
            let cases: Vec<char> = presentation.chars().collect();
            let p = crate::projector::intersect_projectors(&cases).unwrap();
            assert!(
                p.frobenius_distance(&hr.projector) < 1e-9,
                "presentation {presentation}"
            );
        }
    }
}
