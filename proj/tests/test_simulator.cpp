#include <gtest/gtest.h>

#include <cmath>

#include "episodes/simulator.hpp"

using namespace episodes;

namespace {

SimParams small(double duration = 5.0) {
    SimParams p;
    p.duration = duration;
    p.rng_seed = 17;
    return p;
}

double mean_rate(const EventSequence& s, std::size_t neuron, double duration) {
    return static_cast<double>(s.histogram().at(static_cast<EventTypeId>(neuron))) / duration;
}

}  // namespace

TEST(RateLaw, Identities) {
    const double lm = lambda_m(0.95, 0.001);
    EXPECT_NEAR(1.0 - std::exp(-lm * 0.001), 0.95, 1e-12);
    const double d = displacement_d(lm, 20.0);
    EXPECT_NEAR(sigmoid_rate(lm, 1.0, 0.0, d), 20.0, 1e-9);
    const double w = w_strong(0.9, lm, 20.0, 1.0);
    EXPECT_NEAR(sigmoid_rate(lm, 1.0, w, d), 0.9 * lm, 1e-9);
    SimParams p;
    EXPECT_NEAR(adjusted_rate(p), 1.5, 1e-12);
}

TEST(RateLaw, DomainChecks) {
    EXPECT_THROW(lambda_m(1.0, 0.001), DomainError);
    EXPECT_THROW(lambda_m(0.5, 0.0), DomainError);
    EXPECT_THROW(displacement_d(10.0, 20.0), DomainError);
    EXPECT_THROW(w_strong(1.0, 3000.0, 20.0, 1.0), DomainError);
    SimParams p;
    p.e_strong = 0.0;
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(Labels, SpreadsheetStyle) {
    EXPECT_EQ(neuron_label(0), "A");
    EXPECT_EQ(neuron_label(25), "Z");
    EXPECT_EQ(neuron_label(26), "AA");
    EXPECT_EQ(neuron_labels(3), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Network, FullSchemeEdgeCount) {
    SimParams p = small();
    p.n_neurons = 3;
    p.scheme = ConnectionScheme::Full;
    auto rng = make_stream(1, 0);
    auto net = build_network(p, rng);
    EXPECT_EQ(net.synapses.size(), 6u);
    for (const auto& s : net.synapses) {
        EXPECT_NE(s.pre, s.post);
        EXPECT_LE(std::abs(s.weight), p.c);
        EXPECT_EQ(s.delay_steps, 5u);
    }
}

TEST(Network, ZeroBoundGivesZeroWeights) {
    SimParams p = small();
    p.c = 0.0;
    auto rng = make_stream(1, 0);
    for (const auto& s : build_network(p, rng).synapses) EXPECT_EQ(s.weight, 0.0);
}

TEST(Network, BernoulliPairsMeanEdges) {
    SimParams p = small();
    double total = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_stream(static_cast<std::uint64_t>(t), 0);
        total += static_cast<double>(build_network(p, rng).synapses.size());
    }
    EXPECT_NEAR(total / trials, 325.0, 5.0);
}

TEST(Network, RandomFanoutBounds) {
    SimParams p = small();
    p.scheme = ConnectionScheme::RandomFanout;
    auto rng = make_stream(4, 0);
    auto net = build_network(p, rng);
    EXPECT_LE(net.synapses.size(), 26u * 25u);
    for (const auto& s : net.synapses) EXPECT_NE(s.pre, s.post);
    EXPECT_EQ(parse_connection_scheme(to_string(ConnectionScheme::RandomFanout)), ConnectionScheme::RandomFanout);
    EXPECT_THROW(parse_connection_scheme("ring"), DomainError);
}

TEST(Simulate, ZeroWeightNetworkFiresAtBaseRate) {
    SimParams p = small(50.0);
    p.c = 0.0;
    auto rng = make_stream(p.rng_seed, 0);
    auto s = simulate(build_network(p, rng), p);
    double sum = 0.0;
    for (std::size_t j = 0; j < p.n_neurons; ++j) sum += mean_rate(s, j, p.duration);
    // The 1 ms dead time shaves about 2% off 20 Hz.
    EXPECT_NEAR(sum / static_cast<double>(p.n_neurons), 20.0 / (1.0 + 20.0 * 0.001), 0.5);
}

TEST(Simulate, RefractoryAndOrdering) {
    SimParams p = small();
    p.lambda_normal = 400.0;
    p.c = 0.0;
    auto s = simulate(empty_network(p), p);
    std::vector<double> last(p.n_neurons, -1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) { EXPECT_LE(s[i - 1].time, s[i].time); }
        auto& l = last[s[i].type];
        if (l >= 0.0) { EXPECT_GE(std::llround(s[i].time * 1e9) - std::llround(l * 1e9), 1000000); }
        l = s[i].time;
    }
}

TEST(Simulate, Deterministic) {
    SimParams p = small(2.0);
    auto a = simulate(build_pattern_network(p, {}), p);
    auto b = simulate(build_pattern_network(p, {}), p);
    EXPECT_EQ(a.events(), b.events());
    p.rng_seed = 18;
    auto c = simulate(build_pattern_network(p, {}), p);
    EXPECT_NE(a.events(), c.events());
}

TEST(Patterns, EmbeddingAdjustsAndStrengthens) {
    SimParams p = small();
    PatternSpec spec{PatternKind::Synfire, {{0}, {1, 2}, {3}}, {5, 3}};
    auto net = build_pattern_network(p, {spec});
    EXPECT_FALSE(net.adjusted[0]);
    EXPECT_TRUE(net.adjusted[1] && net.adjusted[2] && net.adjusted[3]);
    EXPECT_NEAR(net.base_rate[1], 1.5, 1e-12);
    const double lm = lambda_m(p.e_strong, p.dt);
    auto s01 = net.find_synapse(0, 1);
    ASSERT_TRUE(s01);
    EXPECT_NEAR(net.synapses[*s01].weight, w_strong(p.beta, lm, 1.5, p.delta_lambda), 1e-9);
    EXPECT_EQ(net.synapses[*s01].delay_steps, 5u);
    auto s13 = net.find_synapse(1, 3);
    ASSERT_TRUE(s13);
    EXPECT_NEAR(net.synapses[*s13].weight, 0.5 * w_strong(p.beta, lm, 1.5, p.delta_lambda), 1e-9);
    EXPECT_EQ(net.synapses[*s13].delay_steps, 3u);
}

TEST(Patterns, Validation) {
    PatternSpec bad_order{PatternKind::Order, {{0, 1}, {2}}, {}};
    EXPECT_THROW(bad_order.validate(26), DomainError);
    PatternSpec out_of_range{PatternKind::Synfire, {{0}, {30}}, {}};
    EXPECT_THROW(out_of_range.validate(26), DomainError);
    PatternSpec delays{PatternKind::Synfire, {{0}, {1}}, {5, 5}};
    EXPECT_THROW(delays.validate(26), DomainError);
    PatternSpec self{PatternKind::Synfire, {{0}, {0}}, {}};
    EXPECT_THROW(embed_pattern(empty_network(small()), self, small()), DomainError);
}

TEST(Patterns, ChainPropagates) {
    SimParams p = small(20.0);
    PatternSpec spec{PatternKind::Order, {{0}, {1}}, {5}};
    auto s = simulate(build_pattern_network(p, {spec}), p);
    // B fires mostly in the step window 5 ms after A.
    std::size_t followed = 0, a_count = 0;
    std::size_t bi = 0;
    std::vector<double> bt;
    for (const auto& e : s.events())
        if (e.type == 1) bt.push_back(e.time);
    for (const auto& e : s.events()) {
        if (e.type != 0) continue;
        ++a_count;
        while (bi < bt.size() && bt[bi] <= e.time + 0.004) ++bi;
        if (bi < bt.size() && bt[bi] <= e.time + 0.006 + 1e-9) ++followed;
    }
    ASSERT_GT(a_count, 200u);
    EXPECT_GT(static_cast<double>(followed) / static_cast<double>(a_count), 0.8);
}

TEST(Nulls, KindsAndSchedules) {
    SimParams p = small(1.0);
    for (auto k : {NullKind::RandomNetwork, NullKind::FixedRates, NullKind::GroupedFixedRates, NullKind::VaryingRates,
                   NullKind::GroupedVaryingRates}) {
        EXPECT_EQ(parse_null_kind(to_string(k)), k);
        auto s = generate_null_dataset(k, p);
        EXPECT_GT(s.size(), 0u);
        EXPECT_EQ(s.alphabet().size(), p.n_neurons);
    }
    EXPECT_THROW(parse_null_kind("bogus"), DomainError);
    auto rng = make_stream(1, 0);
    auto grouped = null_rate_schedule(NullKind::GroupedFixedRates, p, rng);
    ASSERT_EQ(grouped.rates.size(), 1u);
    EXPECT_EQ(grouped.rates[0][0], grouped.rates[0][5]);
    auto varying = null_rate_schedule(NullKind::VaryingRates, p, rng);
    EXPECT_EQ(varying.rates.size(), 20u);
    for (const auto& row : varying.rates)
        for (auto r : row) EXPECT_TRUE(r >= 10.0 && r <= 30.0);
}

TEST(Nulls, FixedRateMatchesSchedule) {
    SimParams p = small(40.0);
    p.t_refractory = 0.0;
    RateSchedule s{p.n_steps(), {std::vector<double>(p.n_neurons, 25.0)}};
    auto seq = simulate_rates(s, p);
    EXPECT_NEAR(static_cast<double>(seq.size()) / (26.0 * 40.0), 25.0, 0.6);
}
