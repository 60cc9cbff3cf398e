pub mod bimod;
pub mod exactlin;
pub mod filtgen;
pub mod report;
pub mod voa;
pub mod zhu;
