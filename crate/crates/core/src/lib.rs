pub mod hahn;
pub mod hensel;
pub mod leading_terms;
pub mod multi_index;
pub mod residue;
pub mod rho;
pub mod sigma_poly;
pub mod syntax;
pub mod upoly;
pub mod value_group;
