#include "qss/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qss {

namespace {

// substream salts; fixed forever so transcripts replay byte-identically
constexpr std::uint64_t kProtoSalt = 0x70726f746f;
constexpr std::uint64_t kNoiseSalt = 0x6e6f697365;
constexpr std::uint64_t kAttackSalt = 0x61747461636b;
constexpr std::uint64_t kPostSalt = 0x706f7374;

struct RoundStage {
    RoundRecord rec;
    std::vector<int> check_order;   // shareholder announce order if checked
    std::vector<int> check_values;  // per shareholder: bit, or eigenvalue (ghz)
    std::optional<int> eve_guess;
    bool attacked = false;
    int combo_sign = 0;  // ghz only
};

// Rounds are mutually independent given their derived streams, so they can be
// evaluated on any number of workers; results land in index order.
template <typename Fn>
void parallel_rounds(int rounds, int threads, Fn&& fn) {
    if (threads <= 1 || rounds < 2) {
        for (int i = 0; i < rounds; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        try {
            for (int i; (i = next.fetch_add(1)) < rounds;) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(rounds);
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::min(threads, rounds);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<int> announce_order(int n, OrderingPolicy policy, Rng& rng) {
    std::vector<int> order(n);
    if (policy == OrderingPolicy::FixedBobLast) {
        for (int k = 0; k < n; ++k) order[k] = n - 1 - k;  // bob speaks last
    } else {
        for (int k = 0; k < n; ++k) order[k] = k;
        for (int k = n - 1; k > 0; --k)
            std::swap(order[k], order[rng.uniform_int(k + 1)]);
    }
    return order;
}

// ---- per-round simulation ---------------------------------------------------

// Draw order (protocol stream): L coin, A coin, encode uniform,
// [memory off: per-share basis coins], per-share measurement uniforms,
// [random ordering: check permutation draws].
RoundStage product_round(const ProtocolConfig& cfg, const EncodingTable& table,
                         const AttackStrategy& attack, int i) {
    Rng prng(derive_seed(cfg.master_seed, kProtoSalt, i));
    Rng nrng(derive_seed(cfg.master_seed, kNoiseSalt, i));
    RoundAdversary adv(attack, derive_seed(cfg.master_seed, kAttackSalt, i));
    const int n = cfg.num_shareholders;

    RoundStage st;
    RoundRecord& rec = st.rec;
    rec.index = i;
    rec.basis_bit = prng.coin();
    rec.secret_bit = prng.coin();
    rec.prepared_pattern =
        encode(table, rec.basis_bit, rec.secret_bit, prng.uniform());
    const std::vector<int> bits = pattern_bits(rec.prepared_pattern);
    const Basis prep_basis = basis_from_bit(rec.basis_bit);
    StateVector state =
        prep_product(std::vector<Basis>(n, prep_basis), bits);

    // channel: flip noise in the preparation basis, then interception
    for (int s = 0; s < n; ++s)
        if (nrng.uniform() < cfg.noise_flip_prob)
            state = apply_pauli(state, s, rec.basis_bit ? Basis::Z : Basis::X);

    std::vector<bool> tapped(n, false);
    st.attacked = adv.active();
    if (st.attacked) {
        if (attack.kind == AttackKind::BellJoint) {
            adv.intercept_pair(state, 0, 1);
            tapped[0] = tapped[1] = true;
        } else if (attack.kind == AttackKind::InterceptResend) {
            adv.intercept_share(state, attack.channel);
            tapped[attack.channel] = true;
        }
    }
    for (int s = 0; s < n; ++s) rec.transmissions.push_back({s, tapped[s] != 0});

    for (int s = 0; s < n; ++s)
        rec.announcements.push_back({party_name(s), "receipt", "ok"});
    rec.announcements.push_back({"alice", "basis", to_string(prep_basis)});

    rec.shareholder_bases.resize(n);
    rec.shareholder_outcomes.resize(n);
    if (cfg.quantum_memory) {
        for (int s = 0; s < n; ++s) rec.shareholder_bases[s] = rec.basis_bit;
    } else {
        for (int s = 0; s < n; ++s) rec.shareholder_bases[s] = prng.coin();
    }
    for (int s = 0; s < n; ++s) {
        auto [out, next] = measure_qubit(
            state, s, basis_from_bit(rec.shareholder_bases[s]), prng.uniform());
        state = next;
        rec.shareholder_outcomes[s] = out.bit;
    }
    if (!cfg.quantum_memory)
        for (int s = 0; s < n; ++s)
            rec.announcements.push_back(
                {party_name(s), "basis",
                 to_string(basis_from_bit(rec.shareholder_bases[s]))});

    st.check_order = announce_order(n, cfg.ordering_policy, prng);
    st.check_values = rec.shareholder_outcomes;
    if (st.attacked) st.eve_guess = adv.product_guess(rec.basis_bit);
    rec.adversary_note = adv.note();
    return st;
}

// Draw order (protocol stream): alice/bob/charlie basis coins, alice
// measurement, [honest: bob measurement], charlie measurement,
// [random ordering: basis-phase coin, check-phase coin] (independent draws).
RoundStage ghz_round(const ProtocolConfig& cfg, const AttackStrategy& attack,
                     int i) {
    Rng prng(derive_seed(cfg.master_seed, kProtoSalt, i));
    Rng nrng(derive_seed(cfg.master_seed, kNoiseSalt, i));
    RoundAdversary adv(attack, derive_seed(cfg.master_seed, kAttackSalt, i));

    RoundStage st;
    RoundRecord& rec = st.rec;
    rec.index = i;
    StateVector state = prep_ghz(3);

    const Basis alice_basis = prng.coin() ? Basis::Y : Basis::X;
    const Basis bob_honest = prng.coin() ? Basis::Y : Basis::X;
    const Basis charlie_basis = prng.coin() ? Basis::Y : Basis::X;

    // qubits 1 and 2 go over the channel; a phase flip inverts both X and Y
    // outcomes, which is what a flip error means for this scheme
    for (int q : {1, 2})
        if (nrng.uniform() < cfg.noise_flip_prob)
            state = apply_pauli(state, q, Basis::Z);

    const bool cheat = adv.active();
    if (cheat) adv.ghz_capture(state);
    rec.transmissions = {{0, cheat}, {1, cheat}};
    rec.announcements.push_back({"bob", "receipt", "ok"});
    rec.announcements.push_back({"charlie", "receipt", "ok"});

    auto [oa, s1] = measure_qubit(state, 0, alice_basis, prng.uniform());
    state = s1;
    const int alice_eig = oa.eigenvalue;
    int bob_eig = 0, charlie_eig = 0;
    if (cheat) {
        auto [oc, s2] = measure_qubit(state, 2, charlie_basis, prng.uniform());
        state = s2;
        charlie_eig = oc.eigenvalue;
    } else {
        auto [ob, s2] = measure_qubit(state, 1, bob_honest, prng.uniform());
        auto [oc, s3] = measure_qubit(s2, 2, charlie_basis, prng.uniform());
        state = s3;
        bob_eig = ob.eigenvalue;
        charlie_eig = oc.eigenvalue;
    }

    const bool bob_first_basis =
        cfg.ordering_policy == OrderingPolicy::Random && prng.coin();
    const Basis bob_announced =
        cheat ? adv.ghz_announce_basis(bob_first_basis
                                           ? std::nullopt
                                           : std::optional<Basis>(charlie_basis))
              : bob_honest;
    if (bob_first_basis) {
        rec.announcements.push_back({"bob", "basis", to_string(bob_announced)});
        rec.announcements.push_back({"charlie", "basis", to_string(charlie_basis)});
    } else {
        rec.announcements.push_back({"charlie", "basis", to_string(charlie_basis)});
        rec.announcements.push_back({"bob", "basis", to_string(bob_announced)});
    }
    rec.announcements.push_back({"alice", "basis", to_string(alice_basis)});
    rec.ghz_bases = {to_string(alice_basis), to_string(bob_announced),
                     to_string(charlie_basis)};
    st.combo_sign = ghz_combo_sign(rec.ghz_bases);

    const bool bob_first_check =
        cfg.ordering_policy == OrderingPolicy::Random && prng.coin();
    int bob_value = bob_eig;
    if (cheat)
        bob_value = st.combo_sign != 0
                        ? adv.ghz_check_value(
                              st.combo_sign,
                              bob_first_check ? std::nullopt
                                              : std::optional<int>(charlie_eig))
                        : 0;
    rec.ghz_outcomes = {alice_eig, bob_value, charlie_eig};
    st.check_order = bob_first_check ? std::vector<int>{0, 1}
                                     : std::vector<int>{1, 0};
    st.check_values = {bob_value, charlie_eig};
    if (cheat) st.eve_guess = adv.ghz_guess(alice_basis);
    st.attacked = cheat;
    rec.adversary_note = adv.note();
    return st;
}

// Draw order (protocol stream): per channel basis+bit coins, secret coin,
// per channel [memory off: receiver basis coin], measurement uniform,
// [random ordering: check permutation draws].
RoundStage bb84_round(const ProtocolConfig& cfg, const AttackStrategy& attack,
                      int i) {
    Rng prng(derive_seed(cfg.master_seed, kProtoSalt, i));
    Rng nrng(derive_seed(cfg.master_seed, kNoiseSalt, i));
    RoundAdversary adv(attack, derive_seed(cfg.master_seed, kAttackSalt, i));

    RoundStage st;
    RoundRecord& rec = st.rec;
    rec.index = i;
    int abasis[2], abit[2];
    for (int c = 0; c < 2; ++c) {
        abasis[c] = prng.coin();
        abit[c] = prng.coin();
    }
    rec.secret_bit = prng.coin();
    rec.alice_bases = {abasis[0], abasis[1]};
    rec.prepared_pattern = {char('0' + abit[0]), char('0' + abit[1])};

    rec.announcements.push_back({"bob", "receipt", "ok"});
    rec.announcements.push_back({"charlie", "receipt", "ok"});
    rec.shareholder_bases.resize(2);
    rec.shareholder_outcomes.resize(2);
    st.attacked = adv.active();
    for (int c = 0; c < 2; ++c) {
        StateVector q = prep_product({basis_from_bit(abasis[c])}, {abit[c]});
        if (nrng.uniform() < cfg.noise_flip_prob)
            q = apply_pauli(q, 0, abasis[c] ? Basis::Z : Basis::X);
        bool tapped = false;
        if (st.attacked && attack.kind == AttackKind::InterceptResend &&
            attack.channel == c) {
            adv.intercept_share(q, 0);
            tapped = true;
        }
        rec.transmissions.push_back({c, tapped});
        const int rbasis = cfg.quantum_memory ? abasis[c] : prng.coin();
        auto [out, collapsed] =
            measure_qubit(q, 0, basis_from_bit(rbasis), prng.uniform());
        rec.shareholder_bases[c] = rbasis;
        rec.shareholder_outcomes[c] = out.bit;
        rec.announcements.push_back({"alice", c == 0 ? "basis_bob" : "basis_charlie",
                                     to_string(basis_from_bit(abasis[c]))});
        rec.announcements.push_back(
            {party_name(c), "basis", to_string(basis_from_bit(rbasis))});
    }

    st.check_order = announce_order(2, cfg.ordering_policy, prng);
    st.check_values = rec.shareholder_outcomes;
    rec.adversary_note = adv.note();
    return st;
}

// ---- shared post-pass -------------------------------------------------------

int alice_key_bit(const ProtocolConfig& cfg, const RoundRecord& r) {
    if (cfg.protocol == ProtocolKind::Ghz) return (1 - r.ghz_outcomes[0]) / 2;
    return r.secret_bit;
}

int shareholder_key_bit(const ProtocolConfig& cfg, const RoundRecord& r, int k) {
    switch (cfg.protocol) {
        case ProtocolKind::Product:
            return r.shareholder_outcomes[k];
        case ProtocolKind::Ghz: {
            // charlie folds the public combo sign into his share so that the
            // XOR of the two share bits reproduces alice's bit
            const int sign_bit = ghz_combo_sign(r.ghz_bases) < 0 ? 1 : 0;
            const int bit = (1 - r.ghz_outcomes[k + 1]) / 2;
            return k == 0 ? bit : bit ^ sign_bit;
        }
        case ProtocolKind::TwoBb84:
            // bob's share is his channel key; charlie's is secret xor r,
            // delivered under his own channel key
            return k == 0 ? r.shareholder_outcomes[0]
                          : r.secret_bit ^ (r.prepared_pattern[0] - '0');
    }
    return 0;
}

bool check_is_error(const ProtocolConfig& cfg, const RoundRecord& r,
                    const RoundStage& st) {
    switch (cfg.protocol) {
        case ProtocolKind::Product:
        case ProtocolKind::TwoBb84: {
            const std::vector<int> sent = pattern_bits(r.prepared_pattern);
            for (std::size_t k = 0; k < sent.size(); ++k)
                if (st.check_values[k] != sent[k]) return true;
            return false;
        }
        case ProtocolKind::Ghz:
            return r.ghz_outcomes[0] * st.check_values[0] * st.check_values[1] !=
                   st.combo_sign;
    }
    return false;
}

std::string check_value_str(const ProtocolConfig& cfg, int value) {
    if (cfg.protocol == ProtocolKind::Ghz) return value > 0 ? "+1" : "-1";
    return std::to_string(value);
}

Transcript finalize(const ProtocolConfig& cfg, const AttackStrategy& attack,
                    std::vector<RoundStage> stages, int num_shareholders) {
    std::vector<RoundRecord> records;
    records.reserve(stages.size());
    for (auto& s : stages) records.push_back(std::move(s.rec));

    sift(records, cfg);
    Rng post(derive_seed(cfg.master_seed, kPostSalt));
    select_check_rounds(records, cfg.check_fraction, post);

    for (std::size_t i = 0; i < records.size(); ++i) {
        RoundRecord& r = records[i];
        if (!r.is_check) continue;
        const RoundStage& st = stages[i];
        for (int k : st.check_order)
            r.announcements.push_back({party_name(k), "check_value",
                                       check_value_str(cfg, st.check_values[k])});
        r.check_error = check_is_error(cfg, r, st);
    }

    Transcript t;
    t.config = cfg;
    const double qber = estimate_qber(records);
    t.aborted = qber > cfg.abort_qber_threshold;
    t.shareholder_keys.assign(num_shareholders, "");
    if (!t.aborted) {
        for (const auto& r : records) {
            if (!r.kept || r.is_check) continue;
            t.alice_key += char('0' + alice_key_bit(cfg, r));
            for (int k = 0; k < num_shareholders; ++k)
                t.shareholder_keys[k] += char('0' + shareholder_key_bit(cfg, r, k));
        }
    }

    if (attack.kind != AttackKind::None) {
        AttackReport rep;
        rep.strategy = attack;
        rep.eve_key_guesses.resize(records.size());
        int definite = 0, hits = 0, attacked_checks = 0, attacked_errors = 0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const RoundStage& st = stages[i];
            const RoundRecord& r = records[i];
            rep.rounds_attacked += st.attacked;
            rep.eve_key_guesses[i] = st.eve_guess;
            if (r.kept && !r.is_check && st.eve_guess) {
                ++definite;
                hits += (*st.eve_guess == alice_key_bit(cfg, r));
            }
            if (st.attacked && r.is_check) {
                ++attacked_checks;
                attacked_errors += r.check_error;
            }
        }
        if (definite > 0)
            rep.leak_rate = static_cast<double>(hits) / definite;
        if (attacked_checks > 0)
            rep.induced_check_qber =
                static_cast<double>(attacked_errors) / attacked_checks;
        t.attack_report = std::move(rep);
    }
    t.records = std::move(records);
    return t;
}

}  // namespace

std::string to_string(ProtocolKind p) {
    switch (p) {
        case ProtocolKind::Product: return "product";
        case ProtocolKind::Ghz: return "ghz";
        case ProtocolKind::TwoBb84: return "two_bb84";
    }
    return "?";
}

std::string to_string(TransmissionMode t) {
    return t == TransmissionMode::Simultaneous ? "simultaneous" : "sequential";
}

std::string to_string(OrderingPolicy o) {
    return o == OrderingPolicy::FixedBobLast ? "fixed_bob_last" : "random";
}

void validate_config(const ProtocolConfig& config) {
    if (config.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (config.num_shareholders < 2)
        throw std::invalid_argument("need at least two shareholders");
    if (!(config.check_fraction > 0.0 && config.check_fraction < 1.0))
        throw std::invalid_argument("check_fraction must lie in (0,1)");
    if (!(config.abort_qber_threshold >= 0.0 && config.abort_qber_threshold < 1.0))
        throw std::invalid_argument("abort_qber_threshold must lie in [0,1)");
    if (!(config.noise_flip_prob >= 0.0 && config.noise_flip_prob <= 1.0))
        throw std::invalid_argument("noise_flip_prob must lie in [0,1]");
}

std::string party_name(int shareholder_index) {
    if (shareholder_index == 0) return "bob";
    if (shareholder_index == 1) return "charlie";
    return "shareholder" + std::to_string(shareholder_index + 1);
}

int ghz_combo_sign(const std::vector<std::string>& bases) {
    if (bases.size() != 3) return 0;
    int ys = 0;
    for (const auto& b : bases) {
        if (b == "Y") ++ys;
        else if (b != "X") return 0;
    }
    if (ys == 0) return +1;
    if (ys == 2) return -1;
    return 0;
}

void sift(std::vector<RoundRecord>& records, const ProtocolConfig& config) {
    for (auto& r : records) {
        switch (config.protocol) {
            case ProtocolKind::Product: {
                bool all = true;
                for (int b : r.shareholder_bases) all = all && b == r.basis_bit;
                r.kept = all;
                break;
            }
            case ProtocolKind::Ghz:
                r.kept = ghz_combo_sign(r.ghz_bases) != 0;
                break;
            case ProtocolKind::TwoBb84: {
                bool all = r.shareholder_bases.size() == r.alice_bases.size();
                for (std::size_t c = 0; all && c < r.alice_bases.size(); ++c)
                    all = r.shareholder_bases[c] == r.alice_bases[c];
                r.kept = all;
                break;
            }
        }
    }
}

void select_check_rounds(std::vector<RoundRecord>& records, double fraction,
                         Rng& rng) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].kept) kept.push_back(i);
    if (kept.empty()) return;
    std::size_t count =
        static_cast<std::size_t>(fraction * static_cast<double>(kept.size()));
    if (count >= kept.size()) count = kept.size() - 1;
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t j =
            t + static_cast<std::size_t>(
                    rng.uniform_int(static_cast<int>(kept.size() - t)));
        std::swap(kept[t], kept[j]);
        records[kept[t]].is_check = true;
    }
}

double estimate_qber(const std::vector<RoundRecord>& records) {
    int checks = 0, errors = 0;
    for (const auto& r : records) {
        if (!r.is_check) continue;
        ++checks;
        errors += r.check_error;
    }
    return checks > 0 ? static_cast<double>(errors) / checks : 0.0;
}

Transcript run_product(const ProtocolConfig& config, const EncodingTable& table,
                       const AttackStrategy& attack, int threads) {
    validate_config(config);
    if (config.protocol != ProtocolKind::Product)
        throw std::invalid_argument("config.protocol must be product");
    if (table.num_shares != config.num_shareholders)
        throw std::invalid_argument(
            "table share count does not match the shareholder count");
    if (const auto violations = validate(table); !violations.empty())
        throw std::invalid_argument("invalid encoding table: " +
                                    violations.front());
    switch (attack.kind) {
        case AttackKind::BellJoint:
            if (config.transmission != TransmissionMode::Simultaneous)
                throw std::invalid_argument(
                    "bell_joint needs both shares in flight at once; "
                    "sequential transmission never offers them");
            if (config.num_shareholders != 2)
                throw std::invalid_argument("bell_joint needs exactly two shares");
            break;
        case AttackKind::GhzCheat:
            throw std::invalid_argument("ghz_cheat applies only to the ghz protocol");
        case AttackKind::InterceptResend:
            if (attack.channel >= config.num_shareholders)
                throw std::invalid_argument("attack channel out of range");
            break;
        case AttackKind::None:
            break;
    }
    std::vector<RoundStage> stages(config.rounds);
    parallel_rounds(config.rounds, threads, [&](int i) {
        stages[i] = product_round(config, table, attack, i);
    });
    return finalize(config, attack, std::move(stages), config.num_shareholders);
}

Transcript run_ghz(const ProtocolConfig& config, const AttackStrategy& attack,
                   int threads) {
    validate_config(config);
    if (config.protocol != ProtocolKind::Ghz)
        throw std::invalid_argument("config.protocol must be ghz");
    if (config.num_shareholders != 2)
        throw std::invalid_argument("the ghz scheme has exactly two shareholders");
    if (attack.kind != AttackKind::None && attack.kind != AttackKind::GhzCheat)
        throw std::invalid_argument("only ghz_cheat targets the ghz protocol");
    std::vector<RoundStage> stages(config.rounds);
    parallel_rounds(config.rounds, threads,
                    [&](int i) { stages[i] = ghz_round(config, attack, i); });
    return finalize(config, attack, std::move(stages), 2);
}

Transcript run_two_bb84(const ProtocolConfig& config,
                        const AttackStrategy& attack, int threads) {
    validate_config(config);
    if (config.protocol != ProtocolKind::TwoBb84)
        throw std::invalid_argument("config.protocol must be two_bb84");
    if (config.num_shareholders != 2)
        throw std::invalid_argument("two_bb84 runs exactly two channels");
    if (attack.kind == AttackKind::BellJoint)
        throw std::invalid_argument("bell_joint targets the product protocol");
    if (attack.kind == AttackKind::GhzCheat)
        throw std::invalid_argument("ghz_cheat applies only to the ghz protocol");
    if (attack.kind == AttackKind::InterceptResend && attack.channel >= 2)
        throw std::invalid_argument("attack channel out of range");
    std::vector<RoundStage> stages(config.rounds);
    parallel_rounds(config.rounds, threads,
                    [&](int i) { stages[i] = bb84_round(config, attack, i); });
    return finalize(config, attack, std::move(stages), 2);
}

}  // namespace qss
