pub mod dickson;
pub mod exactla;
pub mod gf;
pub mod grp;
pub mod harness;
pub mod lietype;
pub mod modrep;
