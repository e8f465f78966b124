use iadof::dofbound::fig1_demo;

fn main() {
    let c = fig1_demo();
    println!("|S + S|  = {}", c.common);
    println!("|S + S'| = {}", c.different);
}
