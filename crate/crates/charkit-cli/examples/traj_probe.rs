use charkit::bayes::{bayes_initialize, InitConfig};
use charkit::data::{decode_one_hot, stratified_subset};
use charkit::mlp::{Activation, Mlp};
use charkit::train::{train, TrainConfig};
use charkit_cli::dataset::{load_digits, to_training_set, DataSource};

fn main() {
    let set = load_digits(&DataSource::Synthetic { count: 2000 }).unwrap();
    let indices = stratified_subset(&set.labels, 1000, 10);
    let data = to_training_set(&set, &indices, 28, 28, Activation::Sigmoid).unwrap();
    for eta in [3.0, 1.0, 0.3] {
        for (name, mut net) in [
            ("random", Mlp::random(&[784, 50, 10], Activation::Sigmoid, true, 1.0, 0).unwrap()),
            ("bayes", {
                let cfg = InitConfig::new(1.0, 0);
                bayes_initialize(&[784, 50, 10], Activation::Sigmoid, true, &data, &cfg).unwrap()
            }),
        ] {
            let cfg = TrainConfig { eta, max_epochs: 150, epsilon: 1e-9, shuffle_seed: 0, weight_seed: 0 };
            let rep = train(&mut net, &data, &cfg).unwrap();
            let acc = (0..data.len())
                .filter(|&i| {
                    let out = net.forward(data.input(i)).unwrap().pop().unwrap();
                    decode_one_hot(&out) as u32 == data.label(i)
                })
                .count();
            let mn = rep.mse_trajectory.iter().skip(100).cloned().fold(f64::INFINITY, f64::min);
            println!("eta={eta} {name}: last={:.4} min_after100={mn:.4} train_acc={}/1000", rep.mse_trajectory.last().unwrap(), acc);
        }
    }
}
