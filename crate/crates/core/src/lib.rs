pub mod cli;
pub mod degrees;
pub mod devlin;
pub mod pstruct;
pub mod tangent;
pub mod tournament;
pub mod trees;
