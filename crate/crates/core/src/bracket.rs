//! The bracket on homogeneous 1-forms:
//! `{a, b} = sum_j d_x^{j+1}(b) da/du_(j) - d_x^{j+1}(a) db/du_(j)`.

use crate::diffpoly::DiffPoly;

pub fn bracket_poly(alpha: &DiffPoly, beta: &DiffPoly) -> DiffPoly {
    let jmax = alpha.order().max(beta.order());
    let mut out = DiffPoly::zero();
    let mut da = alpha.dx();
    let mut db = beta.dx();
    for j in 0..=jmax {
        let pa = alpha.partial(j);
        let pb = beta.partial(j);
        if !pa.is_zero() {
            out.add_assign_ref(&(&db * &pa));
        }
        if !pb.is_zero() {
            out.add_assign_ref(&-&(&da * &pb));
        }
        if j < jmax {
            da = da.dx();
            db = db.dx();
        }
    }
    out
}
