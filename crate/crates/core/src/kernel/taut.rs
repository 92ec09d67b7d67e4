use std::collections::HashMap;

use crate::syntax::Formula;

/// Maps maximal non-boolean subformulas (and atoms) to propositional letters,
/// consistently across all formulas encoded with the same instance.
#[derive(Default)]
pub struct Atomizer {
    letters: HashMap<Formula, usize>,
    order: Vec<Formula>,
}

impl Atomizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn letter(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.letters.get(f) {
            return i;
        }
        let i = self.order.len();
        self.letters.insert(f.clone(), i);
        self.order.push(f.clone());
        i
    }

    /// Registers every atomized subformula of `f`.
    pub fn visit(&mut self, f: &Formula) {
        match f {
            Formula::Falsum => {}
            Formula::Not(a) => self.visit(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::Xor(a, b) => {
                self.visit(a);
                self.visit(b);
            }
            _ => {
                self.letter(f);
            }
        }
    }
}

/// The subformulas `taut_consequence` treats as opaque letters, in first-seen
/// order over `formulas`.
pub fn atomized_subformulas(formulas: &[&Formula]) -> Vec<Formula> {
    let mut at = Atomizer::new();
    for f in formulas {
        at.visit(f);
    }
    at.order
}

/// Truth value of `f` where atomized subformulas take values from `value`.
pub fn eval_atomized(f: &Formula, value: &mut dyn FnMut(&Formula) -> bool) -> bool {
    match f {
        Formula::Falsum => false,
        Formula::Not(a) => !eval_atomized(a, value),
        Formula::And(a, b) => eval_atomized(a, value) && eval_atomized(b, value),
        Formula::Or(a, b) => eval_atomized(a, value) || eval_atomized(b, value),
        Formula::Imp(a, b) => !eval_atomized(a, value) || eval_atomized(b, value),
        Formula::Iff(a, b) => eval_atomized(a, value) == eval_atomized(b, value),
        Formula::Xor(a, b) => eval_atomized(a, value) != eval_atomized(b, value),
        _ => value(f),
    }
}

type Lit = i32;

/// Tseitin encoding into CNF; variables are numbered from 1.
struct Cnf {
    vars: i32,
    clauses: Vec<Vec<Lit>>,
    atom_vars: HashMap<usize, Lit>,
    falsum: Option<Lit>,
}

impl Cnf {
    fn fresh(&mut self) -> Lit {
        self.vars += 1;
        self.vars
    }

    fn encode(&mut self, f: &Formula, at: &mut Atomizer) -> Lit {
        match f {
            Formula::Falsum => match self.falsum {
                Some(l) => l,
                None => {
                    let v = self.fresh();
                    self.clauses.push(vec![-v]);
                    self.falsum = Some(v);
                    v
                }
            },
            Formula::Not(a) => -self.encode(a, at),
            Formula::And(a, b) => {
                let (x, y) = (self.encode(a, at), self.encode(b, at));
                let v = self.fresh();
                self.clauses.extend([vec![-v, x], vec![-v, y], vec![v, -x, -y]]);
                v
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.encode(a, at), self.encode(b, at));
                self.or(x, y)
            }
            Formula::Imp(a, b) => {
                let (x, y) = (self.encode(a, at), self.encode(b, at));
                self.or(-x, y)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.encode(a, at), self.encode(b, at));
                self.iff(x, y)
            }
            Formula::Xor(a, b) => {
                let (x, y) = (self.encode(a, at), self.encode(b, at));
                -self.iff(x, y)
            }
            _ => {
                let letter = at.letter(f);
                if let Some(&v) = self.atom_vars.get(&letter) {
                    return v;
                }
                let v = self.fresh();
                self.atom_vars.insert(letter, v);
                v
            }
        }
    }

    fn or(&mut self, x: Lit, y: Lit) -> Lit {
        let v = self.fresh();
        self.clauses.extend([vec![v, -x], vec![v, -y], vec![-v, x, y]]);
        v
    }

    fn iff(&mut self, x: Lit, y: Lit) -> Lit {
        let v = self.fresh();
        self.clauses.extend([vec![-v, -x, y], vec![-v, x, -y], vec![v, x, y], vec![v, -x, -y]]);
        v
    }
}

/// DPLL with unit propagation. `assign[v]` is 0 (unset), 1 or -1.
fn satisfiable(clauses: &[Vec<Lit>], assign: &mut Vec<i8>) -> bool {
    let value = |assign: &Vec<i8>, l: Lit| -> i8 {
        let a = assign[l.unsigned_abs() as usize];
        if l > 0 {
            a
        } else {
            -a
        }
    };
    let mut trail = Vec::new();
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut count = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        count += 1;
                        unassigned = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            match (count, unassigned) {
                (0, _) => {
                    for v in trail {
                        assign[v] = 0;
                    }
                    return false;
                }
                (1, Some(l)) => {
                    let v = l.unsigned_abs() as usize;
                    assign[v] = if l > 0 { 1 } else { -1 };
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = (1..assign.len()).find(|&v| assign[v] == 0);
    let result = match branch {
        None => true,
        Some(v) => {
            let mut found = false;
            for choice in [1, -1] {
                assign[v] = choice;
                if satisfiable(clauses, assign) {
                    found = true;
                    break;
                }
            }
            assign[v] = 0;
            found
        }
    };
    if !result {
        for v in trail {
            assign[v] = 0;
        }
    }
    result
}

/// True iff every boolean assignment to the atomized subformulas that makes
/// all `premises` true also makes `goal` true.
pub fn taut_consequence(goal: &Formula, premises: &[&Formula]) -> bool {
    let mut at = Atomizer::new();
    let mut cnf = Cnf { vars: 0, clauses: Vec::new(), atom_vars: HashMap::new(), falsum: None };
    for p in premises {
        let l = cnf.encode(p, &mut at);
        cnf.clauses.push(vec![l]);
    }
    let g = cnf.encode(goal, &mut at);
    cnf.clauses.push(vec![-g]);
    let mut assign = vec![0i8; cnf.vars as usize + 1];
    !satisfiable(&cnf.clauses, &mut assign)
}
