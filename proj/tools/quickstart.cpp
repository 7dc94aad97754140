// Simulates the four-neuron chain A -> B -> C -> D and mines it back.

#include <iostream>

#include "episodes/episodes.hpp"

int main() {
    using namespace episodes;
    SimParams p;
    p.duration = 20.0;
    p.rng_seed = 7;

    PatternSpec chain{PatternKind::Order, {{0}, {1}, {2}, {3}}, {5, 5, 5}};
    auto seq = simulate(build_pattern_network(p, {chain}), p);
    std::cout << seq.size() << " spikes\n";

    MiningConfig cfg;
    cfg.threshold_fraction = 0.01;
    cfg.candidate_intervals = {{0.004, 0.006}};
    auto mined = mine_serial(seq, cfg);
    for (const auto& r : mined.at(mined.largest_size()))
        std::cout << format_episode(r.episode, seq.alphabet()) << " : " << r.count << '\n';

    cfg.candidate_intervals.clear();
    cfg.expiry = 0.001;
    auto sync = mine_parallel(seq, cfg);
    std::cout << "largest synchronous group: " << sync.largest_size() << '\n';
}
