use fa::automaton::WeightedAutomaton;
use fa::builders::*;
use fa::closures::*;
use fa::porc::*;
use fa::Limits;
use num_bigint::BigUint;
use std::time::Instant;

fn random_simple(seed: &mut u64, states: usize) -> WeightedAutomaton {
    let mut next = || {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*seed >> 33) as u32
    };
    let mut m = WeightedAutomaton::with_systematic_names(states, vec!['a', 'b']).unwrap();
    for q in 0..states {
        if next() % 2 == 0 { m.set_init(q, BigUint::from(1u32)); }
        if next() % 2 == 0 { m.set_out(q, BigUint::from(1u32)); }
        for s in 0..2 {
            for t in 0..states {
                if next() % 100 < 40 { m.set_trans(q, s, t, BigUint::from(1u32)); }
            }
        }
    }
    m
}

fn main() {
    let limits = Limits::default();
    let mut seed = 42u64;
    let t_all = Instant::now();
    let mut max_states = 0usize;
    for i in 0..20 {
        let f = random_simple(&mut seed, 3);
        for c in [2u64, 3] {
            let t = Instant::now();
            match binom_const(&f, c, &limits) {
                Ok(b) => {
                    max_states = max_states.max(b.num_states());
                    for word in fa::words::words_up_to(2, 4) {
                        let v: u64 = (&f.evaluate_word(&word)).try_into().unwrap();
                        let expect = if v >= c { (v-c+1..=v).product::<u64>() / (1..=c).product::<u64>() } else if c == 0 { 1 } else { 0 };
                        assert_eq!(b.evaluate_word(&word), BigUint::from(expect), "i={i} c={c} word {word:?}");
                    }
                    if t.elapsed().as_millis() > 500 {
                        println!("slow binom i={i} c={c}: {} states {:?}", b.num_states(), t.elapsed());
                    }
                }
                Err(e) => println!("binom failed i={i} c={c}: {e}"),
            }
        }
    }
    println!("20 random binom c=2,3 done in {:?}, max states {max_states}", t_all.elapsed());

    // Cubic PORC constituent on the unary counter: phi(n) = C(n,3) = (n^3-3n^2+2n)/6.
    let t = Instant::now();
    let counter = unary_counter();
    let phi = PorcFunction::from_json(r#"{"offset":0,"period":1,"constituents":[["0","2/6","-3/6","1/6"]],"initial_values":[]}"#).unwrap();
    match porc_compose(&counter, &phi, &limits) {
        Ok(m) => {
            println!("cubic porc: {} states in {:?}", m.num_states(), t.elapsed());
            let t = Instant::now();
            for n in 0u64..=30 {
                let w = vec![0usize; n as usize];
                assert_eq!(m.evaluate_word(&w), phi.eval_u64(n).unwrap(), "n={n}");
            }
            println!("  n<=30 in {:?}", t.elapsed());
        }
        Err(e) => println!("cubic porc failed: {e}"),
    }

    // Period-2 PORC with quadratic constituents on the counter.
    let t = Instant::now();
    let phi = PorcFunction::from_json(r#"{"offset":3,"period":2,"constituents":[["0","0","1/2"],["1/2","0","1/2"]],"initial_values":["7","0","7"]}"#).unwrap();
    match porc_compose(&counter, &phi, &limits) {
        Ok(m) => {
            println!("period-2 quadratic porc: {} states in {:?}", m.num_states(), t.elapsed());
            for n in 0u64..=30 {
                let w = vec![0usize; n as usize];
                assert_eq!(m.evaluate_word(&w), phi.eval_u64(n).unwrap(), "n={n}");
            }
            println!("  checked");
        }
        Err(e) => println!("period-2 porc failed: {e}"),
    }
}
