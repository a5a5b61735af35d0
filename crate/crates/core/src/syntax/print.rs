//! Pretty-printers. `|` is printed flat; prefix bodies that are
//! compositions get parentheses, input bodies always do unless they are `0`.

use std::cell::Cell;
use std::fmt::{self, Display, Formatter, Write as _};

use crate::name::{Name, NameSort};
use crate::pi::PiTerm;
use crate::rho::RhoTerm;
use crate::rhocomb::RcTerm;
use crate::yoshida::YTerm;

/// Processes that can appear inside a quote.
pub trait Quotable: Display {
    fn is_zero(&self) -> bool;
}

impl Quotable for RhoTerm {
    fn is_zero(&self) -> bool {
        matches!(self, RhoTerm::Zero)
    }
}

impl Quotable for RcTerm {
    fn is_zero(&self) -> bool {
        matches!(self, RcTerm::Zero)
    }
}

thread_local! {
    static ELIDE_ABOVE: Cell<Option<u64>> = const { Cell::new(None) };
}

/// Prints `t` with every quote heavier than `max_weight` nodes shown as
/// `@#` and the first 16 hex digits of its fingerprint. Display only: the
/// parser does not read elided names back.
pub fn render_elided<T: Display>(t: &T, max_weight: u64) -> String {
    let before = ELIDE_ABOVE.with(|c| c.replace(Some(max_weight)));
    let out = t.to_string();
    ELIDE_ABOVE.with(|c| c.set(before));
    out
}

impl<P: Quotable> Display for Name<P> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Name::Atom(a) => write!(f, "{a}"),
            Name::Quote(p) if p.is_zero() => f.write_str("@0"),
            Name::Quote(p) if ELIDE_ABOVE.with(Cell::get).is_some_and(|w| p.meta().weight > w) => {
                write!(f, "@#{:016x}", (p.fingerprint() >> 64) as u64)
            }
            Name::Quote(p) => write!(f, "@({p})"),
        }
    }
}

fn join_args<N: Display>(f: &mut Formatter<'_>, kw: &str, args: &[N]) -> fmt::Result {
    f.write_str(kw)?;
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

/// Shape needed to decide where parentheses go.
trait Printable: Display {
    fn par_parts(&self) -> Option<(&Self, &Self)>;
    fn is_nil(&self) -> bool;
}

fn print_par<T: Printable>(t: &T, f: &mut Formatter<'_>, first: &mut bool) -> fmt::Result {
    match t.par_parts() {
        Some((a, b)) => {
            print_par(a, f, first)?;
            print_par(b, f, first)
        }
        None => {
            if !*first {
                f.write_str(" | ")?;
            }
            *first = false;
            write!(f, "{t}")
        }
    }
}

/// Body of a `new` or `*`: parenthesized if a composition.
fn item<T: Printable>(t: &T, f: &mut Formatter<'_>) -> fmt::Result {
    if t.par_parts().is_some() {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Input body: parenthesized unless `0`.
fn input_body<T: Printable>(t: &T, f: &mut Formatter<'_>) -> fmt::Result {
    if t.is_nil() {
        f.write_str("0")
    } else {
        write!(f, "({t})")
    }
}

impl Printable for PiTerm {
    fn par_parts(&self) -> Option<(&Self, &Self)> {
        match self {
            PiTerm::Par(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn is_nil(&self) -> bool {
        matches!(self, PiTerm::Zero)
    }
}

impl Display for PiTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            PiTerm::Zero => f.write_str("0"),
            PiTerm::Par(..) => print_par(self, f, &mut true),
            PiTerm::Output { channel, payload } => write!(f, "{channel}!({payload})"),
            PiTerm::Input { binder, channel, body } => {
                write!(f, "for({binder} <- {channel})")?;
                input_body(body.as_ref(), f)
            }
            PiTerm::New { binder, body } => {
                write!(f, "(new {binder})")?;
                item(body.as_ref(), f)
            }
            PiTerm::Repl(p) => {
                f.write_char('*')?;
                item(p.as_ref(), f)
            }
        }
    }
}

impl<N: NameSort> Printable for YTerm<N> {
    fn par_parts(&self) -> Option<(&Self, &Self)> {
        match self {
            YTerm::Par(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn is_nil(&self) -> bool {
        matches!(self, YTerm::Zero)
    }
}

impl<N: NameSort> Display for YTerm<N> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            YTerm::Zero => f.write_str("0"),
            YTerm::Par(..) => print_par(self, f, &mut true),
            YTerm::M(a, b) => write!(f, "m({a},{b})"),
            YTerm::Agent(kind, args) => join_args(f, kind.keyword(), args),
            YTerm::New(n, body) => {
                write!(f, "(new {n})")?;
                item(body.as_ref(), f)
            }
            YTerm::Repl(p) => {
                f.write_char('*')?;
                item(p.as_ref(), f)
            }
        }
    }
}

impl Printable for RhoTerm {
    fn par_parts(&self) -> Option<(&Self, &Self)> {
        match self {
            RhoTerm::Par(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn is_nil(&self) -> bool {
        matches!(self, RhoTerm::Zero)
    }
}

impl Display for RhoTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            RhoTerm::Zero => f.write_str("0"),
            RhoTerm::Par(..) => print_par(self, f, &mut true),
            RhoTerm::Input { binder, channel, body } => {
                write!(f, "for({binder} <- {channel})")?;
                input_body(body.as_ref(), f)
            }
            RhoTerm::Lift { channel, payload } => match payload.as_ref() {
                RhoTerm::Drop(y) => write!(f, "{channel}!({y})"),
                p => write!(f, "{channel}!({p})"),
            },
            RhoTerm::Drop(x) => write!(f, "*({x})"),
        }
    }
}

impl Printable for RcTerm {
    fn par_parts(&self) -> Option<(&Self, &Self)> {
        match self {
            RcTerm::Par(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn is_nil(&self) -> bool {
        matches!(self, RcTerm::Zero)
    }
}

impl Display for RcTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            RcTerm::Zero => f.write_str("0"),
            RcTerm::Par(..) => print_par(self, f, &mut true),
            RcTerm::M(a, p) => write!(f, "m({a},{p})"),
            RcTerm::Agent(kind, args) => join_args(f, kind.keyword(), args),
            RcTerm::Drop(x) => write!(f, "*({x})"),
        }
    }
}
