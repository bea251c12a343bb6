//! Named example measures.

use crate::error::Result;
use crate::grammar::parse_measure;
use crate::measures::Measure;
use crate::moments::CatalogSequence;

/// Literals of the standard examples, in a fixed order.
pub const CATALOG: &[&str] = &[
    "density:lebesgue",
    "density:poly:(2,1)",
    "density:poly:(3,2)",
    "density:expgap:(1,1)",
    "atomic:[(0.5,1)]",
    "atomic:[(0.25,0.5),(0.75,0.5)]",
    "moments:geometric:(0.5)",
    "moments:power:(0.5)",
    "moments:power:(2)",
    "moments:shifted",
    "moments:cesaro",
];

/// Point mass at the origin; its moments vanish beyond index 0.
pub const ORIGIN_ATOM: &str = "atomic:[(0,1)]";

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub measure: Measure,
}

pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG.iter().map(|&label| CatalogEntry { label, measure: parse_measure(label).expect("catalog literal parses") }).collect()
}

/// Entries whose moments have rational closed forms.
pub fn rational_sequences() -> Vec<(&'static str, CatalogSequence)> {
    vec![
        ("moments:geometric:(0.5)", CatalogSequence::Geometric { a: 0.5 }),
        ("moments:power:(2)", CatalogSequence::Power { p: 2.0 }),
        ("moments:shifted", CatalogSequence::Shifted),
        ("moments:cesaro", CatalogSequence::Cesaro),
    ]
}

/// Moment prefix of a catalog entry.
pub fn catalog_moments(label: &str, n_max: usize) -> Result<crate::moments::MomentSequence<f64>> {
    parse_measure(label)?.moments_upto(n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_has_unit_scale_mass() {
        for e in catalog() {
            let m = e.measure.total_mass().unwrap();
            assert!(m > 0.0 && m <= 2.0, "{}: {m}", e.label);
        }
        assert!(!parse_measure(ORIGIN_ATOM).unwrap().charges_open_interval());
    }
}
