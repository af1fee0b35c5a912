#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qss/analysis.hpp"
#include "qss/protocol.hpp"
#include "qss/serialize.hpp"

using namespace qss;

namespace {

ProtocolConfig product_config(int rounds = 2000, std::uint64_t seed = 11) {
    ProtocolConfig c;
    c.protocol = ProtocolKind::Product;
    c.rounds = rounds;
    c.master_seed = seed;
    return c;
}

std::string xor_of_shares(const Transcript& t) {
    std::string out(t.alice_key.size(), '0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        int x = 0;
        for (const auto& key : t.shareholder_keys) x ^= key[i] - '0';
        out[i] = char('0' + x);
    }
    return out;
}

}  // namespace

TEST_CASE("ideal product run keeps everything and the shares recombine") {
    const ProtocolConfig cfg = product_config(4000, 42);
    const Transcript t = run_product(cfg, parity_table(2));
    CHECK_FALSE(t.aborted);
    CHECK(efficiency(t) == 1.0);
    CHECK(estimate_qber(t.records) == 0.0);
    CHECK(t.alice_key.size() == 3000);  // rounds * (1 - check_fraction)
    CHECK(t.alice_key == xor_of_shares(t));
    for (const auto& r : t.records) CHECK(r.kept);
}

TEST_CASE("without quantum memory the keep rate drops to the match probability") {
    ProtocolConfig cfg = product_config(10000, 7);
    cfg.quantum_memory = false;
    const Transcript t = run_product(cfg, parity_table(2));
    CHECK_FALSE(t.aborted);
    const double eff = efficiency(t);
    CHECK(std::abs(eff - 0.25) <= oracle::binomial_4sigma(0.25, 10000));
    CHECK(t.alice_key == xor_of_shares(t));
    CHECK(estimate_qber(t.records) == 0.0);
}

TEST_CASE("kept flags agree with the basis rule recomputed from the records") {
    for (bool memory : {true, false}) {
        ProtocolConfig cfg = product_config(1500, 23);
        cfg.quantum_memory = memory;
        const Transcript t = run_product(cfg, parity_table(2));
        for (const auto& r : t.records) {
            bool match = true;
            for (int b : r.shareholder_bases) match = match && b == r.basis_bit;
            CHECK(r.kept == match);
            if (r.check_error) {
                CHECK(r.is_check);
                CHECK(r.kept);
            }
            if (r.is_check) CHECK(r.kept);
        }
    }
}

TEST_CASE("identical seeds replay byte-identical transcripts at any thread count") {
    const ProtocolConfig cfg = product_config(800, 99);
    const std::string a = transcript_to_json(run_product(cfg, parity_table(2)));
    const std::string b = transcript_to_json(run_product(cfg, parity_table(2)));
    const std::string c =
        transcript_to_json(run_product(cfg, parity_table(2), no_attack(), 4));
    const std::string d =
        transcript_to_json(run_product(cfg, parity_table(2), no_attack(), 13));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a == d);

    ProtocolConfig g = cfg;
    g.protocol = ProtocolKind::Ghz;
    const std::string e = transcript_to_json(run_ghz(g, ghz_cheat(), 1));
    const std::string f = transcript_to_json(run_ghz(g, ghz_cheat(), 8));
    CHECK(e == f);
}

TEST_CASE("check selection takes an exact uniform sample of the kept rounds") {
    std::vector<RoundRecord> records(100);
    for (int i = 0; i < 100; ++i) {
        records[i].index = i;
        records[i].kept = true;
    }
    Rng rng(3);
    select_check_rounds(records, 0.5, rng);
    int checks = 0;
    for (const auto& r : records) checks += r.is_check;
    CHECK(checks == 50);

    // never consumes every kept round
    std::vector<RoundRecord> tiny(2);
    tiny[0].kept = tiny[1].kept = true;
    Rng rng2(4);
    select_check_rounds(tiny, 0.9, rng2);
    int tiny_checks = tiny[0].is_check + tiny[1].is_check;
    CHECK(tiny_checks == 1);

    CHECK(estimate_qber(records) == 0.0);
    records[3].is_check = true;
    records[3].check_error = true;
    CHECK(estimate_qber(records) > 0.0);
}

TEST_CASE("raising the abort threshold never changes the surviving key") {
    ProtocolConfig strict = product_config(3000, 5);
    strict.abort_qber_threshold = 0.001;
    ProtocolConfig lax = strict;
    lax.abort_qber_threshold = 0.9;
    const AttackStrategy eve = intercept_resend(1);
    const Transcript ts = run_product(strict, parity_table(2), eve);
    const Transcript tl = run_product(lax, parity_table(2), eve);
    CHECK(ts.aborted);
    CHECK_FALSE(tl.aborted);
    CHECK(ts.alice_key.empty());
    REQUIRE(ts.records.size() == tl.records.size());
    for (std::size_t i = 0; i < ts.records.size(); ++i) {
        CHECK(ts.records[i].kept == tl.records[i].kept);
        CHECK(ts.records[i].is_check == tl.records[i].is_check);
        CHECK(ts.records[i].check_error == tl.records[i].check_error);
    }
    // the lax key is exactly the kept non-check secret bits
    std::string expected;
    for (const auto& r : tl.records)
        if (r.kept && !r.is_check) expected += char('0' + r.secret_bit);
    CHECK(tl.alice_key == expected);
}

TEST_CASE("flip noise produces the closed-form per-share error rate") {
    ProtocolConfig cfg = product_config(20000, 31);
    cfg.noise_flip_prob = 0.1;
    cfg.abort_qber_threshold = 0.5;
    const Transcript t = run_product(cfg, parity_table(2));
    CHECK_FALSE(t.aborted);
    const QberSummary q = qber_summary(t);
    REQUIRE(q.check_rounds > 0);
    const double n = q.check_rounds;
    // each share flips independently with p = 0.1
    for (int share : {0, 1})
        CHECK(std::abs(*q.per_share[share] - 0.1) <=
              oracle::binomial_4sigma(0.1, n));
    // a round errors when any share flipped: 1 - (1-p)^2
    const double round_p = 1.0 - 0.9 * 0.9;
    CHECK(std::abs(*q.aggregate - round_p) <=
          oracle::binomial_4sigma(round_p, n));
}

TEST_CASE("ghz rounds keep half the combos and never break the product rule") {
    ProtocolConfig cfg;
    cfg.protocol = ProtocolKind::Ghz;
    cfg.rounds = 10000;
    cfg.master_seed = 8;
    const Transcript t = run_ghz(cfg);
    CHECK_FALSE(t.aborted);
    const double eff = efficiency(t);
    CHECK(std::abs(eff - 0.5) <= oracle::binomial_4sigma(0.5, cfg.rounds));
    CHECK(estimate_qber(t.records) == 0.0);
    for (const auto& r : t.records) {
        const int sign = ghz_combo_sign(r.ghz_bases);
        CHECK(r.kept == (sign != 0));
        if (!r.kept) continue;
        // zero tolerance on the correlation sign, check round or not
        CHECK(r.ghz_outcomes[0] * r.ghz_outcomes[1] * r.ghz_outcomes[2] == sign);
    }
    // the sign-folded shares recombine to alice's key
    CHECK(t.alice_key == xor_of_shares(t));
}

TEST_CASE("two bb84 sessions sift independently and the pad recombines") {
    ProtocolConfig cfg;
    cfg.protocol = ProtocolKind::TwoBb84;
    cfg.rounds = 10000;
    cfg.master_seed = 13;
    SUBCASE("with memory nothing is lost") {
        const Transcript t = run_two_bb84(cfg);
        CHECK_FALSE(t.aborted);
        CHECK(efficiency(t) == 1.0);
        CHECK(estimate_qber(t.records) == 0.0);
        CHECK(t.alice_key == xor_of_shares(t));
    }
    SUBCASE("without memory each channel keeps about half") {
        cfg.quantum_memory = false;
        const Transcript t = run_two_bb84(cfg);
        CHECK_FALSE(t.aborted);
        double ch_kept[2] = {0, 0};
        for (const auto& r : t.records)
            for (int c = 0; c < 2; ++c)
                ch_kept[c] += r.shareholder_bases[c] == r.alice_bases[c];
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(ch_kept[c] / cfg.rounds - 0.5) <=
                  oracle::binomial_4sigma(0.5, cfg.rounds));
        CHECK(std::abs(efficiency(t) - 0.25) <=
              oracle::binomial_4sigma(0.25, cfg.rounds));
        CHECK(t.alice_key == xor_of_shares(t));
    }
}

TEST_CASE("malformed configs and mismatched tables are rejected") {
    ProtocolConfig cfg = product_config();
    cfg.rounds = 0;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);
    cfg = product_config();
    cfg.check_fraction = 0.0;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);
    cfg = product_config();
    cfg.check_fraction = 1.0;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);
    cfg = product_config();
    cfg.abort_qber_threshold = 1.0;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);
    cfg = product_config();
    cfg.noise_flip_prob = 1.5;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);
    cfg = product_config();
    CHECK_THROWS_AS(run_product(cfg, parity_table(3)), std::invalid_argument);
    cfg.protocol = ProtocolKind::Ghz;
    CHECK_THROWS_AS(run_product(cfg, parity_table(2)), std::invalid_argument);

    EncodingTable broken = parity_table(2);
    broken.cells[0][0].clear();
    cfg = product_config();
    CHECK_THROWS_AS(run_product(cfg, broken), std::invalid_argument);
}

TEST_CASE("n-party runs keep the full xor identity") {
    for (int parties : {3, 4, 5}) {
        ProtocolConfig cfg = product_config(1200, 100 + parties);
        cfg.num_shareholders = parties;
        const Transcript t = run_product(cfg, parity_table(parties));
        CHECK_FALSE(t.aborted);
        CHECK(efficiency(t) == 1.0);
        REQUIRE(t.shareholder_keys.size() == static_cast<std::size_t>(parties));
        CHECK(t.alice_key == xor_of_shares(t));
    }
}

TEST_CASE("csv export carries one row per round with the fixed header") {
    ProtocolConfig cfg = product_config(50, 2);
    const Transcript t = run_product(cfg, parity_table(2));
    const std::string csv = transcript_to_csv(t);
    CHECK(csv.rfind("index,basis,kept,is_check,check_error\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
    const bool has_basis_column = csv.find("0,Z,") != std::string::npos ||
                                  csv.find("0,X,") != std::string::npos;
    CHECK(has_basis_column);
}
