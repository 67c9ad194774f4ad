//! Front end for `ehall-core`: the expression language, run configuration,
//! the verification suites and the subcommands built on them.

/// Call a generic function on a context over the configured field.
macro_rules! on_field {
    ($cfg:expr, $f:path $(, $arg:expr)*) => {
        match &$cfg.field {
            $crate::config::FieldMode::Symbolic => $f(&$crate::suites::symbolic_ctx($cfg) $(, $arg)*),
            $crate::config::FieldMode::Point(s, t) => $f(&$crate::suites::point_ctx($cfg, s, t)? $(, $arg)*),
        }
    };
}

pub mod commands;
pub mod config;
pub mod eval;
pub mod expr;
pub mod suites;
