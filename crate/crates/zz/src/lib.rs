//! Report assembly and check orchestration behind the `zz` command.

pub mod checks;
pub mod report;
