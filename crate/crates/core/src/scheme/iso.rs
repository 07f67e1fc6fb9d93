use super::model::ASchemeModel;
use crate::dlat::all_order_isomorphisms;
use crate::poly::Fraction;

/// Searches for an isomorphism `X → Y` of birational models: a bijection of
/// points preserving the order such that every open has the same section
/// ring inside the function field and corresponding points have the same
/// prime. `field_map` sends `K_Y`'s base variables into `K_X` (`None` when
/// both share a base). Returns the point bijection.
pub fn find_isomorphism(x: &ASchemeModel, y: &ASchemeModel, field_map: Option<&[Fraction]>) -> Option<Vec<usize>> {
    let kx = x.field()?;
    y.field()?;
    let map = |f: &Fraction| match field_map {
        Some(m) => kx.map_fraction(f, m),
        None => f.clone(),
    };
    'cand: for f in all_order_isomorphisms(x.space().relation(), y.space().relation()) {
        for u in 0..x.opens().len() {
            if x.opens()[u].is_empty() {
                continue;
            }
            let img = x.opens()[u].map(|p| f[p]);
            let v = y.open_index(img)?;
            let (Some(ex), Some(ey)) = (&x.section(u).embedding, &y.section(v).embedding) else { continue 'cand };
            let ey: Vec<Fraction> = ey.iter().map(map).collect();
            if !kx.subring_eq(ex, &ey) {
                continue 'cand;
            }
        }
        for p in 0..x.npoints() {
            let (mx, my) = (x.umin(p), y.umin(f[p]));
            let ring = x.ring(mx);
            let mut mapped = Vec::new();
            for g in y.prime(f[p]).gens() {
                let frac = map(&y.to_fraction(my, g).unwrap());
                match x.from_fraction(mx, &frac) {
                    Some(e) => mapped.push(e),
                    None => continue 'cand,
                }
            }
            let j = ring.ideal(mapped);
            let there = x.prime(p).gens().iter().all(|g| ring.radical_member(g, &j));
            let back = j.gens().iter().all(|g| ring.radical_member(g, x.prime(p)));
            if !(there && back) {
                continue 'cand;
            }
        }
        return Some(f);
    }
    None
}
