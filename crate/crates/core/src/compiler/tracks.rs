//! Formula to automaton over track letters: bits `0..k` are the predicates,
//! bit `k + j` is the `j`-th variable of the layout. Atoms are only correct
//! on valid encodings (every first-order track carries exactly one 1).

use super::raw::{Budget, RawDfa};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};

pub(crate) fn context_of(f: &Formula) -> String {
    let mut s = f.to_string();
    if s.len() > 120 {
        let mut cut = 117;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

/// Automaton accepting the encodings in which the track at `bit` holds
/// exactly one 1.
pub(crate) fn singleton(letters: u32, bit: u32) -> RawDfa {
    RawDfa::from_fn(3, letters, 0, vec![false, true, false], |q, a| {
        let hit = a >> bit & 1 == 1;
        match (q, hit) {
            (0, false) => 0,
            (0, true) | (1, false) => 1,
            _ => 2,
        }
    })
}

/// Compiles `f` over `k` predicate bits and the given variable layout.
/// Free variables of `f` must occur in `layout`.
pub(crate) fn compile_tracks(
    f: &Formula,
    k: usize,
    layout: &[Var],
    budget: &Budget,
) -> Result<RawDfa> {
    let mut t = Tracks {
        k: k as u32,
        vars: layout.to_vec(),
        budget,
    };
    t.go(&f.expand_macros())
}

struct Tracks<'a> {
    k: u32,
    vars: Vec<Var>,
    budget: &'a Budget,
}

impl Tracks<'_> {
    fn letters(&self) -> u32 {
        1 << (self.k as usize + self.vars.len())
    }

    fn bit(&self, v: &str) -> Result<u32> {
        self.vars
            .iter()
            .rposition(|x| x == v)
            .map(|i| self.k + i as u32)
            .ok_or_else(|| Error::Unassigned(v.to_string()))
    }

    fn check_size(&self, f: &Formula) -> Result<()> {
        if self.k as usize + self.vars.len() > 24 {
            return Err(Error::ResourceLimit {
                what: "letter bits",
                limit: 24,
                context: context_of(f),
            });
        }
        Ok(())
    }

    fn go(&mut self, f: &Formula) -> Result<RawDfa> {
        self.check_size(f)?;
        let letters = self.letters();
        let ctx = || context_of(f);
        Ok(match f {
            Formula::True => RawDfa::constant(letters, true),
            Formula::False => RawDfa::constant(letters, false),
            Formula::Pred(i, x) => self.membership(*i as u32, self.bit(x)?),
            Formula::In(s, x) => self.membership(self.bit(s)?, self.bit(x)?),
            Formula::Less(x, y) => {
                if x == y {
                    return Ok(RawDfa::constant(letters, false));
                }
                let (bx, by) = (self.bit(x)?, self.bit(y)?);
                RawDfa::from_fn(4, letters, 0, vec![false, false, true, false], |q, a| {
                    let (hx, hy) = (a >> bx & 1 == 1, a >> by & 1 == 1);
                    match q {
                        0 if hy => 3,
                        0 if hx => 1,
                        0 => 0,
                        1 if hy => 2,
                        1 => 1,
                        q => q,
                    }
                })
            }
            Formula::Equal(x, y) => {
                if x == y {
                    return Ok(RawDfa::constant(letters, true));
                }
                let (bx, by) = (self.bit(x)?, self.bit(y)?);
                RawDfa::from_fn(3, letters, 0, vec![false, true, false], |q, a| {
                    let (hx, hy) = (a >> bx & 1 == 1, a >> by & 1 == 1);
                    match q {
                        0 if hx && hy => 1,
                        0 if hx || hy => 2,
                        q => q,
                    }
                })
            }
            Formula::Not(g) => self.go(g)?.complement(),
            Formula::And(a, b) => self.binary(a, b, |x, y| x && y, &ctx)?,
            Formula::Or(a, b) => self.binary(a, b, |x, y| x || y, &ctx)?,
            Formula::Implies(a, b) => self.binary(a, b, |x, y| !x || y, &ctx)?,
            Formula::ExistsFo(v, g) => self.quantify(v, g, true, false, &ctx)?,
            Formula::ForallFo(v, g) => self.quantify(v, g, true, true, &ctx)?,
            Formula::ExistsSo(v, g) => self.quantify(v, g, false, false, &ctx)?,
            Formula::ForallSo(v, g) => self.quantify(v, g, false, true, &ctx)?,
            Formula::AtLeast(..) => unreachable!("macros are expanded before compilation"),
        })
    }

    /// Accepts when the position carrying `pos_bit` also carries `set_bit`.
    fn membership(&self, set_bit: u32, pos_bit: u32) -> RawDfa {
        RawDfa::from_fn(3, self.letters(), 0, vec![false, true, false], |q, a| {
            if q != 0 || a >> pos_bit & 1 == 0 {
                q
            } else if a >> set_bit & 1 == 1 {
                1
            } else {
                2
            }
        })
    }

    fn binary(
        &mut self,
        a: &Formula,
        b: &Formula,
        op: fn(bool, bool) -> bool,
        ctx: &dyn Fn() -> String,
    ) -> Result<RawDfa> {
        let da = self.go(a)?;
        let db = self.go(b)?;
        Ok(da.product(&db, op, self.budget, ctx)?.minimize())
    }

    /// `∃v.g`, or `∀v.g` as `¬∃v.¬g` when `universal`.
    fn quantify(
        &mut self,
        v: &Var,
        g: &Formula,
        first_order: bool,
        universal: bool,
        ctx: &dyn Fn() -> String,
    ) -> Result<RawDfa> {
        self.vars.push(v.clone());
        let result = (|| {
            let mut body = self.go(g)?;
            if universal {
                body = body.complement();
            }
            let bit = self.k + self.vars.len() as u32 - 1;
            if first_order {
                body = body
                    .product(&singleton(self.letters(), bit), |x, y| x && y, self.budget, ctx)?
                    .minimize();
            }
            let projected = body.project(bit, self.budget, ctx)?.minimize();
            Ok(if universal {
                projected.complement()
            } else {
                projected
            })
        })();
        self.vars.pop();
        result
    }
}
