//! Conversion of a complex protocol into a real one.
//!
//! Each complex message `a` becomes two real messages `Re(a)`, `Im(a)` sent
//! by the same party, and each complex test `P` becomes the pair
//! `(Re P, Im P)` over the doubled formal variables. A complex `=` branch
//! is taken exactly when both real parts vanish.

use std::collections::BTreeMap;

use super::{Child, Member, NodeId, ProbabilisticProtocol, ProtocolError, ProtocolNode, ProtocolTree, Sign};
use crate::poly::{Pairing, Polynomial};
use crate::scalar::{ComplexRational, Rational};

const REAL_SIGNS: [Sign; 3] = [Sign::Lt, Sign::Eq, Sign::Gt];

/// Real sign pairs `(re, im)` that correspond to one complex sign.
fn real_pairs(sign: Sign) -> Vec<[Sign; 2]> {
    let all = REAL_SIGNS.iter().flat_map(|&a| REAL_SIGNS.iter().map(move |&b| [a, b]));
    match sign {
        Sign::Eq => vec![[Sign::Eq, Sign::Eq]],
        _ => all.filter(|p| *p != [Sign::Eq, Sign::Eq]).collect(),
    }
}

fn expand_key(key: &[Sign]) -> Vec<Vec<Sign>> {
    key.iter().fold(vec![Vec::new()], |acc, &s| {
        let pairs = real_pairs(s);
        acc.iter()
            .flat_map(|prefix| {
                pairs.iter().map(move |p| {
                    let mut k = prefix.clone();
                    k.extend_from_slice(p);
                    k
                })
            })
            .collect()
    })
}

/// `(re x, im x, re y, im y)`: the input layout of a realified tree.
pub fn realify_input(n_x: usize, input: &[ComplexRational]) -> Vec<Rational> {
    let (x, y) = input.split_at(n_x.min(input.len()));
    let re = |v: &[ComplexRational]| v.iter().map(|c| c.re.clone()).collect::<Vec<_>>();
    let im = |v: &[ComplexRational]| v.iter().map(|c| c.im.clone()).collect::<Vec<_>>();
    [re(x), im(x), re(y), im(y)].concat()
}

impl ProtocolTree<ComplexRational> {
    /// Real protocol with at most twice the depth and the same verdicts
    /// (inputs mapped through [`realify_input`]).
    pub fn realify(&self) -> Result<ProtocolTree<Rational>, ProtocolError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(ProtocolError::Invalid(violations));
        }
        let messages = Pairing::blockwise(self.space);
        let space = messages.target();
        let levels = self.node_levels();
        let index: BTreeMap<NodeId, NodeId> =
            levels.iter().enumerate().map(|(i, &(id, _))| (id, i as NodeId)).collect();
        let map_child = |c: &Child| match *c {
            Child::Node(id) => Child::Node(2 * index[&id]),
            leaf => leaf,
        };
        let mut nodes = Vec::with_capacity(2 * levels.len());
        for &(id, level) in &levels {
            let node = &self.nodes[&id];
            let (re, im) = node.message.re_im_split(&messages)?;
            let re_id = 2 * index[&id];
            nodes.push(ProtocolNode::new(re_id, node.party, re).with_branch(vec![], Child::Node(re_id + 1)));

            let formal = Pairing::interleaved_formal(level);
            let mut im_node = ProtocolNode::new(re_id + 1, node.party, im);
            for test in &node.tests {
                let p: Polynomial<ComplexRational> = test.expand()?.to_formal(level)?;
                let (tr, ti) = p.re_im_split(&formal)?;
                im_node = im_node.with_test(tr).with_test(ti);
            }
            for (key, child) in &node.branches {
                for real_key in expand_key(key) {
                    im_node.branches.insert(real_key, map_child(child));
                }
            }
            nodes.push(im_node);
        }
        ProtocolTree::new(space, 0, nodes)
    }
}

impl ProbabilisticProtocol<ComplexRational> {
    pub fn realify(&self) -> Result<ProbabilisticProtocol<Rational>, ProtocolError> {
        let members = self
            .members()
            .iter()
            .map(|m| Ok(Member { weight: m.weight.clone(), tree: m.tree.realify()? }))
            .collect::<Result<Vec<_>, ProtocolError>>()?;
        ProbabilisticProtocol::new(members)
    }
}
