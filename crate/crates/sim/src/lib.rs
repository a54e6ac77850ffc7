//! Monte Carlo campaign driver for the grandmimo link components: paired
//! BLER/complexity sweeps, structure censuses, orthogonality-defect studies,
//! ranking-table emission, and the CSV formats behind the CLI.

pub mod campaign;
pub mod census;
pub mod config;
pub mod odstudy;
pub mod rng;
pub mod tables;

pub use campaign::{run_campaign, wilson95, CampaignResult};
pub use census::{run_structure_census, CensusResult};
pub use config::{ConfigError, DecoderKind, PchMode, SimConfig};
pub use odstudy::{run_od_study, OdStudyResult};
pub use tables::{build_tables, TablesResult};

/// Renders the constellation grid as rows of label strings, top row first.
pub fn dump_constellation(m: u32) -> Result<String, grandmimo::modulation::ModulationError> {
    let c = grandmimo::modulation::Constellation::<grandmimo::Real>::gray_qam(m)?;
    let mut out = String::new();
    for row in 0..c.side() {
        let labels: Vec<String> = (0..c.side())
            .map(|col| c.label_string(c.grid_label(row, col)))
            .collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constellation_dump_is_the_golden_grid() {
        let dump = dump_constellation(16).unwrap();
        let expected = "\
1101 0101 0111 1111
1001 0001 0011 1011
1000 0000 0010 1010
1100 0100 0110 1110
";
        assert_eq!(dump, expected);
    }
}
