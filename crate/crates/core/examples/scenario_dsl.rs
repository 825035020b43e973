//! Parsing, printing and checking a scenario written inline.

use entwb::classify::Definition;
use entwb::harness::parse_scenario;

const TEXT: &str = "\
scenario demo.beam_splitter
statistics = bose
modes = a b
state = (adag(a) + adag(b))*(adag(a) - adag(b))|vac>
partition = modes a | b
generator = 0.5*(adag(a)*a(a) - adag(b)*a(b))
expect qfi = 4
expect verdict.V = entangled
";

fn main() -> entwb::Result<()> {
    let sc = parse_scenario(TEXT)?;
    println!("canonical form:\n{sc}");
    let ev = sc.evaluate()?;
    println!("input norm {:.6}, qfi {:.6}", ev.norm, ev.qfi()?);
    println!("definition V: {}", ev.classify(Definition::V)?.label());
    for c in sc.check()? {
        println!("{} {}: expected {} got {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.expected, c.actual);
    }

    match parse_scenario("scenario broken\nstate = adag(a) +\n") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("\nparse error: {e}"),
    }
    Ok(())
}
