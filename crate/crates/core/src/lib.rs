pub mod exactnum;
pub mod fpgroup;
pub mod quatspin;
pub mod obstruction;
pub mod corpus;
