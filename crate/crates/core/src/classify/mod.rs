pub mod commands;
pub mod config;
pub mod expr;
pub mod families;
pub mod invariants;
pub mod mapexpr;

pub use config::Config;
pub use families::{class_count, classify_order, ClassCount, ClassReport};
pub use invariants::{invariants_of, InvariantRecord};
pub use mapexpr::{parse_aut, parse_map, parse_surface, MapExpr, NamedSurface};
