//! File formats, configuration and benchmark runner for the `kspell`
//! command line tool. The engine itself lives in `kspell-core`.

pub mod bench;
pub mod config;
pub mod formats;
pub mod report;

use kspell_core::resources;

/// Engine version and the versions of the shipped data tables.
pub fn version_string() -> String {
    let table = |t| resources::table_version(t).unwrap_or("?");
    format!(
        "kspell {}\nkhmer_classes {}\ng2p_rules {}\naffixes {}\nhonorifics {}\nlm-format {}",
        resources::ENGINE_VERSION,
        table(resources::KHMER_CLASSES),
        table(resources::G2P_RULES),
        table(resources::AFFIXES),
        table(resources::HONORIFICS),
        formats::LM_VERSION,
    )
}
