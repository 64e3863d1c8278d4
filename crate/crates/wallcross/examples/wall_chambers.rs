//! central-charge walls and chambers near a contraction: derive the wall
//! equations from the charge, enumerate the chambers, and describe the
//! moduli of point-class objects in each one.

use wallcross::walls::{component_report, render_form, wall_arrangement, IntersectionDatum};

fn main() {
    let datum = IntersectionDatum::chain(3, 3).unwrap();
    let arr = wall_arrangement(&datum).unwrap();

    for w in &arr.walls {
        println!(
            "{}: {} = 0, destabilized by {}",
            w.name,
            render_form(&w.form),
            w.destabilizer.render(datum.r)
        );
    }
    println!("{} chambers ({:?})", arr.chambers.len(), arr.transversality);

    for c in &arr.chambers {
        match component_report(&arr, &datum, &c.label) {
            Ok(rep) => {
                let names: Vec<String> = rep.components.iter().map(|k| k.name.clone()).collect();
                println!("  {}: {}", c.label, names.join(" U "));
                for g in &rep.gluings {
                    println!("     glue {} <-> {} along {} = {}", g.component_a, g.component_b, g.locus_a, g.locus_b);
                }
            }
            Err(note) => println!("  {}: {note}", c.label),
        }
    }
}
