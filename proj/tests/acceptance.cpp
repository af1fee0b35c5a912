// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qss/analysis.hpp"
#include "qss/protocol.hpp"
#include "qss/serialize.hpp"

using namespace qss;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s  %d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", number,
                title.c_str(), secs, detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string xor_of_shares(const Transcript& t) {
    std::string out(t.alice_key.size(), '0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        int x = 0;
        for (const auto& key : t.shareholder_keys) x ^= key[i] - '0';
        out[i] = char('0' + x);
    }
    return out;
}

ProtocolConfig make_config(ProtocolKind kind, std::uint64_t seed) {
    ProtocolConfig c;
    c.protocol = kind;
    c.rounds = 10000;
    c.master_seed = seed;
    return c;
}

}  // namespace

int main() {
    criterion(1, "ideal product run: efficiency 1.0, qber 0, xor identity, <5s",
              [](std::string& detail) {
                  const auto start = std::chrono::steady_clock::now();
                  const ProtocolConfig cfg = make_config(ProtocolKind::Product, 42);
                  const Transcript t = run_product(cfg, parity_table(2));
                  const double secs = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - start)
                                          .count();
                  std::ostringstream ss;
                  ss << "efficiency=" << efficiency(t)
                     << " qber=" << estimate_qber(t.records)
                     << " key_bits=" << t.alice_key.size() << " runtime=" << secs
                     << "s";
                  detail = ss.str();
                  return !t.aborted && efficiency(t) == 1.0 &&
                         estimate_qber(t.records) == 0.0 &&
                         !t.alice_key.empty() &&
                         t.alice_key == xor_of_shares(t) && secs < 5.0;
              });

    criterion(2, "ideal ghz run: kept fraction 0.5 within 4 sigma, product rule exact",
              [](std::string& detail) {
                  const ProtocolConfig cfg = make_config(ProtocolKind::Ghz, 43);
                  const Transcript t = run_ghz(cfg);
                  const double eff = efficiency(t);
                  const double bound = oracle::binomial_4sigma(0.5, cfg.rounds);
                  int violations = 0, kept = 0;
                  for (const auto& r : t.records) {
                      if (!r.kept) continue;
                      ++kept;
                      const int sign = ghz_combo_sign(r.ghz_bases);
                      if (r.ghz_outcomes[0] * r.ghz_outcomes[1] *
                              r.ghz_outcomes[2] != sign)
                          ++violations;
                  }
                  std::ostringstream ss;
                  ss << "kept=" << eff << " (|d|<=" << bound
                     << ") sign_violations=" << violations << "/" << kept;
                  detail = ss.str();
                  return !t.aborted && close(eff, 0.5, bound) && violations == 0;
              });

    criterion(3, "ghz cheat, bob announcing last: qber exactly 0, leak rate 1.0",
              [](std::string& detail) {
                  ProtocolConfig cfg = make_config(ProtocolKind::Ghz, 44);
                  cfg.ordering_policy = OrderingPolicy::FixedBobLast;
                  const Transcript t = run_ghz(cfg, ghz_cheat());
                  const double qber = estimate_qber(t.records);
                  const double leak =
                      t.attack_report && t.attack_report->leak_rate
                          ? *t.attack_report->leak_rate
                          : -1.0;
                  std::ostringstream ss;
                  ss << "qber=" << qber << " leak_rate=" << leak;
                  detail = ss.str();
                  return !t.aborted && qber == 0.0 && leak == 1.0;
              });

    criterion(4, "ghz cheat, random ordering: qber matches the enumeration oracle and the run aborts",
              [](std::string& detail) {
                  const auto oracle_result = oracle::ghz_cheat_random_ordering();
                  ProtocolConfig watch = make_config(ProtocolKind::Ghz, 45);
                  watch.ordering_policy = OrderingPolicy::Random;
                  watch.abort_qber_threshold = 0.9;
                  const Transcript t = run_ghz(watch, ghz_cheat());
                  const QberSummary q = qber_summary(t);
                  const double bound = oracle::binomial_4sigma(
                      oracle_result.check_qber, q.check_rounds);
                  ProtocolConfig strict = make_config(ProtocolKind::Ghz, 45);
                  strict.ordering_policy = OrderingPolicy::Random;
                  strict.abort_qber_threshold = 0.02;
                  const bool aborted = run_ghz(strict, ghz_cheat()).aborted;
                  std::ostringstream ss;
                  ss << "oracle=" << oracle_result.check_qber
                     << " measured=" << (q.aggregate ? *q.aggregate : -1)
                     << " (|d|<=" << bound << ") aborts_at_0.02=" << aborted;
                  detail = ss.str();
                  return q.aggregate &&
                         close(*q.aggregate, oracle_result.check_qber, bound) &&
                         aborted;
              });

    criterion(5, "intercept-resend on one channel: tapped-share error at the oracle rate",
              [](std::string& detail) {
                  const double expected = oracle::intercept_resend_error_rate();
                  ProtocolConfig cfg = make_config(ProtocolKind::Product, 46);
                  cfg.abort_qber_threshold = 0.5;
                  const Transcript t =
                      run_product(cfg, parity_table(2), intercept_resend(1));
                  const QberSummary q = qber_summary(t);
                  const double bound =
                      oracle::binomial_4sigma(expected, q.check_rounds);
                  std::ostringstream ss;
                  ss << "oracle=" << expected << " tapped="
                     << (q.per_share.size() > 1 && q.per_share[1]
                             ? *q.per_share[1]
                             : -1)
                     << " untapped="
                     << (q.per_share.size() > 0 && q.per_share[0]
                             ? *q.per_share[0]
                             : -1)
                     << " (|d|<=" << bound << ")";
                  detail = ss.str();
                  return close(expected, 0.25, 1e-9) &&
                         q.per_share.size() == 2 && q.per_share[0] &&
                         *q.per_share[0] == 0.0 && q.per_share[1] &&
                         close(*q.per_share[1], expected, bound);
              });

    criterion(6, "bell joint attack: exact leakage 1.0/0.5 bits, half-rate share errors, zero parity errors, refused when sequential",
              [](std::string& detail) {
                  const EncodingTable table = parity_table(2);
                  const double known =
                      leakage(table, Conditioning::BasisKnown).mutual_information_bits;
                  const double blind =
                      leakage(table, Conditioning::BasisUnknown).mutual_information_bits;
                  const bool exact =
                      close(known, oracle::bell_leakage_bits(true), 1e-9) &&
                      close(known, 1.0, 1e-9) &&
                      close(blind, oracle::bell_leakage_bits(false), 1e-9) &&
                      close(blind, 0.5, 1e-9);

                  ProtocolConfig cfg = make_config(ProtocolKind::Product, 47);
                  cfg.transmission = TransmissionMode::Simultaneous;
                  cfg.abort_qber_threshold = 0.6;
                  const Transcript t =
                      run_product(cfg, parity_table(2), bell_joint());
                  const QberSummary q = qber_summary(t);
                  const double bound =
                      oracle::binomial_4sigma(0.5, q.check_rounds);
                  const bool rates =
                      q.per_share.size() == 2 && q.per_share[0] &&
                      q.per_share[1] && close(*q.per_share[0], 0.5, bound) &&
                      close(*q.per_share[1], 0.5, bound) &&
                      q.parity_error_rate && *q.parity_error_rate == 0.0;

                  bool refused = false;
                  try {
                      ProtocolConfig seq = make_config(ProtocolKind::Product, 47);
                      seq.transmission = TransmissionMode::Sequential;
                      run_product(seq, parity_table(2), bell_joint());
                  } catch (const std::invalid_argument&) {
                      refused = true;
                  }
                  std::ostringstream ss;
                  ss << "leak_known=" << known << " leak_blind=" << blind
                     << " share_errors=(" << *q.per_share[0] << ","
                     << *q.per_share[1] << ") parity="
                     << *q.parity_error_rate << " refused=" << refused;
                  detail = ss.str();
                  return exact && rates && refused;
              });

    criterion(7, "resource ledger, ideal accounting: product (2,1,0), two bb84 (2,2,0), epr row (4,1,2)",
              [](std::string& detail) {
                  const Transcript p =
                      run_product(make_config(ProtocolKind::Product, 48),
                                  parity_table(2));
                  const ResourceLedger lp = resources(p, Accounting::Ideal);
                  const Transcript b =
                      run_two_bb84(make_config(ProtocolKind::TwoBb84, 48));
                  const ResourceLedger lb = resources(b, Accounting::Ideal);
                  const ResourceLedger le = epr_reference_row();
                  auto triple = [](const ResourceLedger& l) {
                      return std::array<long long, 6>{
                          l.per_bit_qubits.num, l.per_bit_qubits.den,
                          l.per_bit_cbits.num,  l.per_bit_cbits.den,
                          l.per_bit_ebits.num,  l.per_bit_ebits.den};
                  };
                  const bool product_ok =
                      triple(lp) == std::array<long long, 6>{2, 1, 1, 1, 0, 1};
                  const bool bb_ok =
                      triple(lb) == std::array<long long, 6>{2, 1, 2, 1, 0, 1};
                  const bool epr_ok =
                      triple(le) == std::array<long long, 6>{4, 1, 1, 1, 2, 1};
                  std::ostringstream ss;
                  ss << "product=(" << lp.per_bit_qubits.str() << ","
                     << lp.per_bit_cbits.str() << "," << lp.per_bit_ebits.str()
                     << ") two_bb84=(" << lb.per_bit_qubits.str() << ","
                     << lb.per_bit_cbits.str() << "," << lb.per_bit_ebits.str()
                     << ") epr=(" << le.per_bit_qubits.str() << ","
                     << le.per_bit_cbits.str() << "," << le.per_bit_ebits.str()
                     << ")";
                  detail = ss.str();
                  return product_ok && bb_ok && epr_ok;
              });

    criterion(8, "n-party generalization: xor identity and secret-blind subset marginals for n = 3, 4, 5",
              [](std::string& detail) {
                  for (int n : {3, 4, 5}) {
                      ProtocolConfig cfg = make_config(ProtocolKind::Product, 50 + n);
                      cfg.num_shareholders = n;
                      cfg.rounds = 4000;
                      const Transcript t = run_product(cfg, parity_table(n));
                      if (t.aborted || t.alice_key.empty()) {
                          detail = "run failed for n=" + std::to_string(n);
                          return false;
                      }
                      if (t.alice_key != xor_of_shares(t)) {
                          detail = "xor identity broken for n=" + std::to_string(n);
                          return false;
                      }
                      // every proper non-empty share subset sees the same
                      // restricted multiset in both secret cells
                      const EncodingTable table = parity_table(n);
                      for (int basis = 0; basis < 2; ++basis)
                          for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                              std::map<std::string, int> restricted[2];
                              for (int secret = 0; secret < 2; ++secret)
                                  for (const auto& pattern :
                                       table.cell(basis, secret)) {
                                      std::string sub;
                                      for (int k = 0; k < n; ++k)
                                          if (mask & (1u << k)) sub += pattern[k];
                                      restricted[secret][sub]++;
                                  }
                              if (restricted[0] != restricted[1]) {
                                  detail = "subset marginal depends on the secret"
                                           " for n=" + std::to_string(n);
                                  return false;
                              }
                          }
                  }
                  detail = "xor identity and 2^n-2 subset marginals per basis";
                  return true;
              });

    criterion(9, "determinism: byte-identical transcripts across replays and thread counts",
              [](std::string& detail) {
                  const ProtocolConfig cfg = make_config(ProtocolKind::Product, 52);
                  const std::string a =
                      transcript_to_json(run_product(cfg, parity_table(2)));
                  const std::string b =
                      transcript_to_json(run_product(cfg, parity_table(2)));
                  const std::string c = transcript_to_json(
                      run_product(cfg, parity_table(2), no_attack(), 8));
                  ProtocolConfig g = make_config(ProtocolKind::Ghz, 53);
                  g.ordering_policy = OrderingPolicy::Random;
                  g.abort_qber_threshold = 0.9;
                  const std::string d =
                      transcript_to_json(run_ghz(g, ghz_cheat(), 1));
                  const std::string e =
                      transcript_to_json(run_ghz(g, ghz_cheat(), 6));
                  std::ostringstream ss;
                  ss << "product bytes=" << a.size() << " ghz bytes=" << d.size();
                  detail = ss.str();
                  return a == b && a == c && d == e;
              });

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", g_failures);
    return 1;
}
