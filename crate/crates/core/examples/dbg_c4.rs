use toricurve::atlas::enumerate_delta_with_interior;
use toricurve::classify::{make_family, FamilyTag};
use toricurve::lattice::{equivalent, relax};

fn main() {
    let cases = [
        ("Gamma_8", FamilyTag::Gamma4k4 { k: 1 }),
        ("Gamma_9^0", FamilyTag::Gamma4k5 { k: 1, m: 0 }),
        ("Gamma_9^1", FamilyTag::Gamma4k5 { k: 1, m: 1 }),
        ("Gamma_7", FamilyTag::Gamma4k3 { k: 1 }),
        ("Gamma_9", FamilyTag::Gamma4k1 { k: 2 }),
    ];
    for (name, tag) in cases {
        let gamma = make_family(tag).unwrap();
        let outer = relax(&gamma).unwrap().as_lattice().unwrap();
        let deltas = enumerate_delta_with_interior(&gamma).unwrap();
        println!("{name}: {} polygons", deltas.len());
        for d in &deltas {
            println!(
                "  {:?} equivalent-to-relax={} equals-relax={}",
                d.vertices(),
                equivalent(d, &outer).is_some(),
                *d == outer
            );
        }
    }
}
