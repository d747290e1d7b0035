use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_polytope::fock::{
    config_energy, enumerate_configs, gale_leq, gale_lt, DEFAULT_CONFIG_CAP,
};
use spectral_polytope::{Configuration, ProblemDims};

fn all_configs(n: usize, d: usize) -> Vec<Configuration> {
    enumerate_configs(&ProblemDims::new(n, d, 1).unwrap(), DEFAULT_CONFIG_CAP).unwrap()
}

fn increasing_h(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut h: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    h.sort_by(f64::total_cmp);
    h
}

#[test]
fn gale_order_is_a_partial_order() {
    for n in 1..=3 {
        for d in n + 1..=6 {
            let cs = all_configs(n, d);
            for a in &cs {
                assert!(gale_leq(a, a).unwrap());
                for b in &cs {
                    let ab = gale_leq(a, b).unwrap();
                    if ab && gale_leq(b, a).unwrap() {
                        assert_eq!(a, b);
                    }
                    if !ab {
                        continue;
                    }
                    for c in &cs {
                        if gale_leq(b, c).unwrap() {
                            assert!(gale_leq(a, c).unwrap(), "{a} {b} {c}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gale_order_is_sound_for_increasing_energies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cs = all_configs(3, 6);
    for _ in 0..1000 {
        let h = increasing_h(6, &mut rng);
        for a in &cs {
            for b in &cs {
                if gale_leq(a, b).unwrap() {
                    assert!(config_energy(a, &h).unwrap() <= config_energy(b, &h).unwrap());
                }
            }
        }
    }
}

#[test]
fn lowest_configuration_and_its_successor_are_unique() {
    for n in 1..=3 {
        for d in n + 1..=6 {
            let cs = all_configs(n, d);
            let lowest = Configuration::lowest(n);
            let minima: Vec<_> = cs
                .iter()
                .filter(|b| cs.iter().all(|a| !gale_lt(a, b).unwrap()))
                .collect();
            assert_eq!(minima, vec![&lowest]);
            let mut succ: Vec<usize> = (1..n).collect();
            succ.push(n + 1);
            let succ = Configuration::new(succ).unwrap();
            // covers of the minimum: strictly above it with nothing in between
            let covers: Vec<_> = cs
                .iter()
                .filter(|b| {
                    gale_lt(&lowest, b).unwrap()
                        && !cs
                            .iter()
                            .any(|c| gale_lt(&lowest, c).unwrap() && gale_lt(c, b).unwrap())
                })
                .collect();
            assert_eq!(covers, vec![&succ]);
        }
    }
}

#[test]
fn incomparable_pair_from_the_third_level() {
    let a = Configuration::new(vec![1, 2, 5]).unwrap();
    let b = Configuration::new(vec![1, 3, 4]).unwrap();
    assert!(!gale_leq(&a, &b).unwrap() && !gale_leq(&b, &a).unwrap());
}
