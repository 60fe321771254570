//! Cut elimination: rewriting a composition system into a straight-line
//! program with the same value.
//!
//! Variables are processed bottom-up. By the time a cut `B[lo:hi]` is
//! reached its referent is already rebuilt cut-free, so the cut can be
//! spliced out as an explicit decomposition of `val(B)[lo..=hi]`: whole
//! variables where the range covers them, boundary pieces elsewhere. Each
//! splice costs O(depth) atoms, so the result stays polynomial in the input
//! size.

use crate::grammar::{extract_atoms, Atom, CompositionSystem, GrammarBuilder, GrammarView, Slp, VarId};

/// Produces a cut-free grammar with the same value. Cut-free input is
/// returned as-is (up to the `Slp` wrapper).
pub fn normalize_cuts(cs: &CompositionSystem) -> Slp {
    if cs.is_cut_free() {
        return Slp::try_new(cs.clone()).expect("checked cut-free");
    }
    let mut b = GrammarBuilder::new(cs.alphabet());
    let mut map: Vec<VarId> = Vec::with_capacity(cs.var_count());
    for v in cs.vars() {
        let mut atoms: Vec<Atom> = Vec::new();
        for atom in cs.atoms_of(v) {
            match atom {
                Atom::Letter(l) => atoms.push(Atom::Letter(*l)),
                Atom::Var(w) => atoms.push(Atom::Var(map[w.0 as usize])),
                Atom::Cut { var, lo, hi } => {
                    let nv = map[var.0 as usize];
                    let len = b.len_of(nv);
                    if lo > len {
                        continue;
                    }
                    let hi = hi.min(len).clone();
                    extract_atoms(&b, nv, lo, &hi, &mut atoms);
                }
            }
        }
        let id = b
            .add(cs.name_of(v), atoms)
            .expect("rebuilding valid rules cannot fail");
        map.push(id);
    }
    Slp::try_new(b.build(map[cs.start().0 as usize])).expect("cuts were eliminated")
}
