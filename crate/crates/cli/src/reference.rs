//! Published reference values, rounded to three decimals, with the tags
//! written to the `provenance` column.

use intricacy_core::sweep::Objective;
use intricacy_core::{CoefficientSystem, Sft};

/// Entropy and horizon-10 profile of a 3-symbol shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopoRow {
    pub tag: &'static str,
    pub adjacency: [[u8; 3]; 3],
    pub entropy: f64,
    pub h10: f64,
    pub asc10: f64,
    pub int10: f64,
}

const fn topo(tag: &'static str, adjacency: [[u8; 3]; 3], v: [f64; 4]) -> TopoRow {
    TopoRow { tag, adjacency, entropy: v[0], h10: v[1], asc10: v[2], int10: v[3] }
}

pub const TOPO_ROWS: [TopoRow; 11] = [
    topo("same-complexity/I", [[1, 1, 0], [0, 0, 1], [1, 1, 0]], [0.481, 0.545, 0.399, 0.254]),
    topo("same-complexity/II", [[0, 1, 1], [1, 0, 1], [1, 0, 0]], [0.481, 0.545, 0.377, 0.208]),
    topo("positive-square/1", [[0, 1, 1], [1, 1, 1], [1, 0, 1]], [0.810, 0.844, 0.490, 0.136]),
    topo("positive-square/2", [[1, 1, 1], [1, 1, 0], [1, 0, 0]], [0.810, 0.830, 0.472, 0.114]),
    topo("same-entropy/1", [[1, 1, 0], [0, 1, 1], [1, 0, 1]], [0.693, 0.734, 0.458, 0.182]),
    topo("same-entropy/2", [[0, 1, 1], [1, 0, 1], [1, 1, 0]], [0.693, 0.734, 0.458, 0.182]),
    topo("same-entropy/3", [[1, 1, 0], [0, 0, 1], [1, 1, 1]], [0.693, 0.734, 0.458, 0.182]),
    topo("same-entropy/4", [[1, 1, 0], [0, 1, 1], [1, 1, 0]], [0.693, 0.734, 0.458, 0.182]),
    topo("same-entropy/5", [[0, 1, 1], [1, 0, 1], [1, 0, 1]], [0.693, 0.734, 0.446, 0.158]),
    topo("same-entropy/6", [[0, 1, 1], [1, 1, 1], [1, 0, 0]], [0.693, 0.734, 0.446, 0.158]),
    topo("same-entropy/7", [[1, 1, 1], [1, 0, 0], [1, 0, 0]], [0.693, 0.722, 0.440, 0.158]),
];

/// `Asp` at horizon 10 under uniform weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureRow {
    pub tag: &'static str,
    pub adjacency: [[u8; 3]; 3],
    pub potential: [f64; 3],
    pub asp10: f64,
}

pub const F1: [f64; 3] = [0.0, 0.0, 1.0];
pub const F2: [f64; 3] = [0.0, 1.0, 0.0];

pub const PRESSURE_ROWS: [PressureRow; 4] = [
    PressureRow { tag: "pressure/1/f1", adjacency: [[0, 1, 1], [1, 0, 1], [1, 1, 0]], potential: F1, asp10: 0.660 },
    PressureRow { tag: "pressure/1/f2", adjacency: [[0, 1, 1], [1, 0, 1], [1, 1, 0]], potential: F2, asp10: 0.660 },
    PressureRow { tag: "pressure/2/f1", adjacency: [[1, 1, 0], [0, 0, 1], [1, 1, 1]], potential: F1, asp10: 0.722 },
    PressureRow { tag: "pressure/2/f2", adjacency: [[1, 1, 0], [0, 0, 1], [1, 1, 1]], potential: F2, asp10: 0.633 },
];

/// Series values (20 terms) of a member of a built-in family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovRow {
    pub tag: &'static str,
    pub family: &'static str,
    pub theta: &'static [f64],
    pub h: f64,
    pub asc: f64,
    pub int: f64,
    /// Objectives for which this row is reported as a maximiser.
    pub maximises: &'static [Objective],
}

pub const MARKOV_ROWS: [MarkovRow; 10] = [
    MarkovRow { tag: "full2-1step/1", family: "full2-1step", theta: &[0.5, 0.5], h: 0.693, asc: 0.347, int: 0.0, maximises: &[Objective::Entropy, Objective::Asc] },
    MarkovRow { tag: "full2-1step/2", family: "full2-1step", theta: &[0.216, 0.0], h: 0.292, asc: 0.208, int: 0.124, maximises: &[Objective::Int] },
    MarkovRow { tag: "full2-1step/3", family: "full2-1step", theta: &[0.0, 0.216], h: 0.292, asc: 0.208, int: 0.124, maximises: &[Objective::Int] },
    MarkovRow { tag: "full2-1step/4", family: "full2-1step", theta: &[0.905, 0.905], h: 0.315, asc: 0.209, int: 0.104, maximises: &[Objective::Int] },
    MarkovRow { tag: "gms-1step/1", family: "gms-1step", theta: &[0.618], h: 0.481, asc: 0.266, int: 0.051, maximises: &[Objective::Entropy] },
    MarkovRow { tag: "gms-1step/2", family: "gms-1step", theta: &[0.533], h: 0.471, asc: 0.271, int: 0.071, maximises: &[Objective::Asc] },
    MarkovRow { tag: "gms-1step/3", family: "gms-1step", theta: &[0.216], h: 0.292, asc: 0.208, int: 0.124, maximises: &[Objective::Int] },
    MarkovRow { tag: "gms-2step/1", family: "gms-2step", theta: &[0.618, 0.618], h: 0.481, asc: 0.266, int: 0.051, maximises: &[Objective::Entropy] },
    MarkovRow { tag: "gms-2step/2", family: "gms-2step", theta: &[0.483, 0.569], h: 0.466, asc: 0.272, int: 0.078, maximises: &[Objective::Asc] },
    MarkovRow { tag: "gms-2step/3", family: "gms-2step", theta: &[0.0, 0.275], h: 0.344, asc: 0.221, int: 0.167, maximises: &[Objective::Int] },
];

impl MarkovRow {
    pub fn value(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Entropy => self.h,
            Objective::Asc => self.asc,
            Objective::Int => self.int,
        }
    }
}

fn same_adjacency(sft: &Sft, adjacency: &[[u8; 3]; 3]) -> bool {
    sft.alphabet_size() == 3
        && sft.state_blocks().iter().all(|b| b.len() == 1)
        && sft.labels() == [0, 1, 2]
        && sft.adjacency().to_rows().iter().zip(adjacency).all(|(a, b)| a[..] == b[..])
}

/// Tag of a profile row matching a reference cell.
pub fn topo_tag(sft: &Sft, coeffs: &CoefficientSystem, n: usize, block_k: usize) -> Option<&'static str> {
    if n != 10 || block_k != 0 || !coeffs.is_uniform() {
        return None;
    }
    TOPO_ROWS.iter().find(|r| same_adjacency(sft, &r.adjacency)).map(|r| r.tag)
}

pub fn pressure_tag(sft: &Sft, potential: &[f64], coeffs: &CoefficientSystem, n: usize) -> Option<&'static str> {
    if n != 10 || !coeffs.is_uniform() {
        return None;
    }
    PRESSURE_ROWS.iter().find(|r| same_adjacency(sft, &r.adjacency) && r.potential[..] == *potential).map(|r| r.tag)
}

/// Tag of a series evaluation at exactly the reference parameters.
pub fn markov_tag(family: &str, theta: &[f64], terms: usize) -> Option<&'static str> {
    if terms != 20 {
        return None;
    }
    MARKOV_ROWS
        .iter()
        .find(|r| r.family == family && r.theta.len() == theta.len() && r.theta.iter().zip(theta).all(|(a, b)| (a - b).abs() < 1e-12))
        .map(|r| r.tag)
}

/// Tag of a maximiser found within `tol` of a reference maximiser.
pub fn maximiser_tag(family: &str, objective: Objective, theta: &[f64], tol: f64) -> Option<&'static str> {
    MARKOV_ROWS
        .iter()
        .find(|r| {
            r.family == family
                && r.maximises.contains(&objective)
                && r.theta.len() == theta.len()
                && r.theta.iter().zip(theta).all(|(a, b)| (a - b).abs() <= tol)
        })
        .map(|r| r.tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use intricacy_core::sft::examples::{entropy_log2_family, positive_square_pair, pressure_pair, same_complexity_pair};

    #[test]
    fn rows_match_library_examples() {
        let mut shifts = Vec::new();
        shifts.extend(same_complexity_pair());
        shifts.extend(positive_square_pair());
        shifts.extend(entropy_log2_family());
        let u = CoefficientSystem::uniform();
        for (sft, row) in shifts.iter().zip(&TOPO_ROWS) {
            assert_eq!(topo_tag(sft, &u, 10, 0), Some(row.tag));
        }
        let [a, b] = pressure_pair();
        assert_eq!(pressure_tag(&a, &F2, &u, 10), Some("pressure/1/f2"));
        assert_eq!(pressure_tag(&b, &F1, &u, 10), Some("pressure/2/f1"));
        assert_eq!(pressure_tag(&b, &F1, &u, 9), None);
    }

    #[test]
    fn markov_tags() {
        assert_eq!(markov_tag("gms-1step", &[0.533], 20), Some("gms-1step/2"));
        assert_eq!(markov_tag("gms-1step", &[0.533], 30), None);
        assert_eq!(maximiser_tag("full2-1step", Objective::Int, &[0.003, 0.22], 0.01), Some("full2-1step/3"));
        assert_eq!(maximiser_tag("full2-1step", Objective::Asc, &[0.003, 0.22], 0.01), None);
    }
}
