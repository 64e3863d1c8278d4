//! exact Ext dimensions on the toric local model of a contractible curve:
//! resolve the sheaves into complexes of line bundles and compute the
//! hypercohomology of the Hom complex weight by weight.

use wallcross::cech::ext_dimensions;
use wallcross::localmodel::{build_model, resolve_sheaf, ModelTag, SheafName};

fn main() {
    let n = 4i64;
    let m = build_model(ModelTag::Single { n });

    // Ext^2(O_C, O_C(-1)) = H^1(P^1, O(-n-1)) = n
    let oc = resolve_sheaf(&SheafName::OnCurve { k: 0 }, &m);
    let tw = resolve_sheaf(&SheafName::OnCurve { k: -1 }, &m);
    let (dims, wi) = ext_dimensions(&oc, &tw, None);
    println!("Ext(O_C, O_C(-1)) on single({n}): {dims:?}");
    println!("  weight window {:?}..{:?}", wi.lo, wi.hi);

    // the rank-two extension at the wall: (2, n+2, 2n-2, n-2)
    let e = resolve_sheaf(&SheafName::SingleE, &m);
    let (dims, _) = ext_dimensions(&e, &e, None);
    println!("RHom(E, E) on single({n}): {dims:?}");

    // on a chain, Hom(O_C12, O_C12(a,b)) has the closed form a+b+1
    let mc = build_model(ModelTag::Chain { n1: 3, n2: 3 });
    let o = resolve_sheaf(&SheafName::OnChain { a: 0, b: 0 }, &mc);
    let f = resolve_sheaf(&SheafName::OnChain { a: 2, b: 1 }, &mc);
    let (dims, _) = ext_dimensions(&o, &f, None);
    println!("RHom(O_C12, O_C12(2,1)) on chain(3,3): {dims:?}");
}
