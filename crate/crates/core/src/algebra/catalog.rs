use super::det::{inversions, permutations, quantum_determinant, twisted_determinant};
use super::elt::AlgElt;
use super::gen::{Ctx, GenSym, Variant};
use super::qcoeff::QCoeff;

/// A named element that must vanish in the algebra.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub elt: AlgElt,
}

fn rel(out: &mut Vec<Relation>, name: String, elt: AlgElt) {
    out.push(Relation { name, elt });
}

/// Defining and derived relations for the context, each as lhs - rhs.
pub fn relation_catalog(ctx: Ctx) -> Vec<Relation> {
    let n = ctx.n;
    let mut out = Vec::new();
    if ctx.variant == Variant::Torus {
        let mut stair = AlgElt::one(ctx);
        for j in 1..=n {
            stair = stair * AlgElt::u(ctx, j, j);
            rel(&mut out, format!("unitary[{}]", j), AlgElt::u(ctx, j, j) * AlgElt::us(ctx, j, j) - AlgElt::one(ctx));
            for k in j + 1..=n {
                rel(
                    &mut out,
                    format!("commute[{},{}]", j, k),
                    AlgElt::u(ctx, j, j) * AlgElt::u(ctx, k, k) - AlgElt::u(ctx, k, k) * AlgElt::u(ctx, j, j),
                );
            }
        }
        rel(&mut out, "product".into(), stair - AlgElt::one(ctx));
        return out;
    }
    let u = |j, k| AlgElt::u(ctx, j, k);
    let us = |j, k| AlgElt::us(ctx, j, k);
    let q = QCoeff::q_pow(1);
    let qi = QCoeff::q_pow(-1);
    let gap = QCoeff::q_gap();
    let one_m_q2 = QCoeff::one() - QCoeff::q_pow(2);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if i < k && j == l {
                        rel(&mut out, format!("col[{}{},{}{}]", i, j, k, l), u(i, j) * u(k, j) - (u(k, j) * u(i, j)).scale(&q));
                    }
                    if i == k && j < l {
                        rel(&mut out, format!("row[{}{},{}{}]", i, j, k, l), u(i, j) * u(i, l) - (u(i, l) * u(i, j)).scale(&q));
                    }
                    if i < k && j > l {
                        rel(&mut out, format!("anti[{}{},{}{}]", i, j, k, l), u(i, j) * u(k, l) - u(k, l) * u(i, j));
                    }
                    if i < k && j < l {
                        rel(
                            &mut out,
                            format!("cross[{}{},{}{}]", i, j, k, l),
                            u(i, j) * u(k, l) - u(k, l) * u(i, j) + (u(i, l) * u(k, j)).scale(&gap),
                        );
                    }
                }
            }
        }
    }
    let det = quantum_determinant(ctx);
    for tau in permutations(n) {
        let sign = QCoeff::neg_q_pow(inversions(&tau) as i32);
        let td = twisted_determinant(ctx, &tau).expect("valid permutation");
        let rhs = match ctx.variant {
            Variant::SUq => AlgElt::scalar(ctx, sign),
            _ => det.scale(&sign),
        };
        let name: Vec<String> = tau.iter().map(|t| (t + 1).to_string()).collect();
        rel(&mut out, format!("twisted-det[{}]", name.join("")), td - rhs);
    }
    if ctx.variant == Variant::Mq {
        return out;
    }
    if ctx.variant == Variant::Uq {
        let dinv = AlgElt::gen(ctx, GenSym::Dinv).unwrap();
        rel(&mut out, "det-inverse".into(), &det * &dinv - AlgElt::one(ctx));
    }
    for j in 1..=n {
        for k in 1..=n {
            let delta = if j == k { AlgElt::one(ctx) } else { AlgElt::zero(ctx) };
            let mut rows = AlgElt::zero(ctx);
            let mut cols = AlgElt::zero(ctx);
            for s in 1..=n {
                rows = rows + u(j, s) * us(k, s);
                cols = cols + us(s, j) * u(s, k);
            }
            rel(&mut out, format!("unitary-rows[{},{}]", j, k), rows - &delta);
            rel(&mut out, format!("unitary-cols[{},{}]", j, k), cols - &delta);
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if i != k && j != l {
                        rel(&mut out, format!("star-commute[{}{},{}{}]", i, j, k, l), u(i, j) * us(k, l) - us(k, l) * u(i, j));
                    }
                }
            }
            for k in 1..=n {
                if i != k {
                    let mut e = u(i, j) * us(k, j) - (us(k, j) * u(i, j)).scale(&q);
                    for p in 1..j {
                        e = e + (u(i, p) * us(k, p)).scale(&one_m_q2);
                    }
                    rel(&mut out, format!("star-col[{}{},{}{}]", i, j, k, j), e);
                }
            }
            for l in 1..=n {
                if j != l {
                    let mut e = u(i, j) * us(i, l) - (us(i, l) * u(i, j)).scale(&qi);
                    for s in i + 1..=n {
                        e = e - (us(s, l) * u(s, j)).scale(&gap);
                    }
                    rel(&mut out, format!("star-row[{}{},{}{}]", i, j, i, l), e);
                }
            }
            let mut e = u(i, j) * us(i, j) - us(i, j) * u(i, j);
            for s in i + 1..=n {
                e = e - (us(s, j) * u(s, j)).scale(&one_m_q2);
            }
            for p in 1..j {
                e = e + (u(i, p) * us(i, p)).scale(&one_m_q2);
            }
            rel(&mut out, format!("star-diag[{}{}]", i, j), e);
        }
    }
    let nn = n;
    for j in 1..nn {
        rel(&mut out, format!("last-col[{}]", j), u(j, nn) * u(nn, nn) - (u(nn, nn) * u(j, nn)).scale(&q));
        rel(&mut out, format!("last-row[{}]", j), u(nn, j) * u(nn, nn) - (u(nn, nn) * u(nn, j)).scale(&q));
        for k in 1..nn {
            rel(&mut out, format!("last-anti[{},{}]", j, k), u(j, nn) * u(nn, k) - u(nn, k) * u(j, nn));
            rel(
                &mut out,
                format!("last-cross[{},{}]", j, k),
                u(j, k) * u(nn, nn) - u(nn, nn) * u(j, k) + (u(j, nn) * u(nn, k)).scale(&gap),
            );
            if j != k {
                rel(&mut out, format!("last-row-star[{},{}]", j, k), u(nn, j) * us(nn, k) - (us(nn, k) * u(nn, j)).scale(&qi));
                rel(&mut out, format!("last-col-star[{},{}]", j, k), u(j, nn) * us(k, nn) - (us(k, nn) * u(j, nn)).scale(&qi));
            }
        }
    }
    rel(
        &mut out,
        "corner".into(),
        us(nn, nn) * u(nn, nn) - (u(nn, nn) * us(nn, nn)).scale(&QCoeff::q_pow(2)) - AlgElt::scalar(ctx, one_m_q2),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_contents() {
        let c = Ctx::suq(2);
        let cat = relation_catalog(c);
        let row = AlgElt::u(c, 1, 1) * AlgElt::u(c, 1, 2) - (AlgElt::u(c, 1, 2) * AlgElt::u(c, 1, 1)).scale(&QCoeff::q_pow(1));
        assert!(cat.iter().any(|r| r.elt == row));
        let mut unit = AlgElt::zero(c) - AlgElt::one(c);
        for s in 1..=2 {
            unit = unit + AlgElt::u(c, 1, s) * AlgElt::us(c, 1, s);
        }
        assert!(cat.iter().any(|r| r.elt == unit));
        assert!(cat.iter().any(|r| r.name == "corner"));
    }
}
