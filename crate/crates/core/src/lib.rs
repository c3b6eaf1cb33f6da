pub mod error;
pub mod export;
pub mod ff;
pub mod gamma;
pub mod glgroup;
pub mod levelzero;
pub mod linalg;
pub mod repcore;
pub mod speh;
