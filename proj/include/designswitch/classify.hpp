#ifndef DESIGNSWITCH_CLASSIFY_HPP
#define DESIGNSWITCH_CLASSIFY_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "design.hpp"
#include "gf_rank.hpp"
#include "hadamard.hpp"
#include "incidence.hpp"
#include "isomorphism.hpp"
#include "switching.hpp"

namespace dsw {

struct ClassifyOptions {
  std::vector<std::uint32_t> primes;
  /// Worker threads; 0 = hardware concurrency.
  std::size_t jobs = 0;
  /// Also certify the Hadamard matrix of designs with Menon parameters.
  bool hadamard = true;
};

struct DesignRecord {
  std::size_t index = 0;
  std::string digest;
  DesignParams params;
  std::map<std::uint32_t, std::size_t> p_ranks;
  BigInt aut_order = 1;
  std::optional<bool> self_dual;
  std::optional<std::string> hadamard_digest;
};

using Histogram = std::map<std::size_t, std::size_t>;

struct ClassificationReport {
  /// Sorted by (digest, index).
  std::vector<DesignRecord> records;
  std::size_t design_count = 0;
  std::size_t class_count = 0;
  std::optional<std::size_t> hadamard_class_count;
  /// p -> rank histogram over all inputs / over one representative per class.
  std::map<std::uint32_t, Histogram> rank_histogram;
  std::map<std::uint32_t, Histogram> class_rank_histogram;
  /// Automorphism group order -> number of classes.
  std::map<BigInt, std::size_t> aut_histogram;

  /// Lowest-index record of each class, in digest order.
  std::vector<const DesignRecord*> representatives() const {
    std::vector<const DesignRecord*> out;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (i == 0 || records[i].digest != records[i - 1].digest) out.push_back(&records[i]);
    return out;
  }

  const DesignRecord& record_for(std::size_t index) const {
    for (const auto& r : records)
      if (r.index == index) return r;
    throw design_error(errc::index_out_of_range, "no design with index " + std::to_string(index));
  }
};

inline DesignRecord classify_one(const IncidenceStructure& inc, std::size_t index, const ClassifyOptions& opt) {
  DesignRecord rec;
  rec.index = index;
  rec.params = validate_2design(inc);
  const Certificate cert = design_certificate(inc);
  rec.digest = cert.digest();
  rec.aut_order = cert.group_order;
  for (std::uint32_t p : opt.primes) rec.p_ranks[p] = p_rank(inc, p);
  if (rec.params.symmetric()) rec.self_dual = cert == design_certificate(dual(inc));
  const std::size_t u = menon_parameter(rec.params.v);
  if (opt.hadamard && rec.params.symmetric() && u != 0 && rec.params.k == 2 * u * u - u)
    rec.hadamard_digest = hadamard_certificate(menon_to_hadamard(inc, u)).digest();
  return rec;
}

/// Classifies every design on a pool of worker threads. The result does not
/// depend on the number of workers.
inline ClassificationReport classify(std::span<const IncidenceStructure> designs, const ClassifyOptions& opt = {}) {
  for (std::uint32_t p : opt.primes)
    if (!is_prime(p)) throw design_error(errc::not_prime, std::to_string(p) + " is not prime");

  ClassificationReport rep;
  rep.design_count = designs.size();
  rep.records.resize(designs.size());

  std::size_t jobs = opt.jobs != 0 ? opt.jobs : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(1, designs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < designs.size(); i = next++) {
      try {
        rep.records[i] = classify_one(designs[i], i, opt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = designs.size();
      }
    }
  };
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rep.records.begin(), rep.records.end(), [](const DesignRecord& a, const DesignRecord& b) {
    return a.digest != b.digest ? a.digest < b.digest : a.index < b.index;
  });

  for (const auto& r : rep.records)
    for (auto [p, rank] : r.p_ranks) ++rep.rank_histogram[p][rank];
  const auto reps = rep.representatives();
  rep.class_count = reps.size();
  for (const auto* r : reps) {
    ++rep.aut_histogram[r->aut_order];
    for (auto [p, rank] : r->p_ranks) ++rep.class_rank_histogram[p][rank];
  }

  std::vector<std::string> hd;
  for (const auto& r : rep.records)
    if (r.hadamard_digest) hd.push_back(*r.hadamard_digest);
  if (!hd.empty()) {
    std::sort(hd.begin(), hd.end());
    rep.hadamard_class_count = static_cast<std::size_t>(std::unique(hd.begin(), hd.end()) - hd.begin());
  }
  return rep;
}

namespace detail {

template <class Key>
nlohmann::ordered_json histogram_json(const std::map<Key, std::size_t>& h) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, count] : h) {
    if constexpr (std::is_same_v<Key, BigInt>)
      out[k.str()] = count;
    else
      out[std::to_string(k)] = count;
  }
  return out;
}

}  // namespace detail

/// Structured report. Keys: design_count, class_count, hadamard_class_count
/// (null when no design has Menon parameters), rank_histogram and
/// class_rank_histogram (prime -> rank -> count), aut_histogram (order ->
/// classes), records (digest, index, params, p_ranks, aut_order, self_dual,
/// hadamard_digest).
inline nlohmann::ordered_json to_json(const ClassificationReport& rep) {
  using json = nlohmann::ordered_json;
  json out;
  out["design_count"] = rep.design_count;
  out["class_count"] = rep.class_count;
  out["hadamard_class_count"] = rep.hadamard_class_count ? json(*rep.hadamard_class_count) : json(nullptr);
  auto by_prime = [](const std::map<std::uint32_t, Histogram>& h) {
    json o = json::object();
    for (const auto& [p, hist] : h) o[std::to_string(p)] = detail::histogram_json(hist);
    return o;
  };
  out["rank_histogram"] = by_prime(rep.rank_histogram);
  out["class_rank_histogram"] = by_prime(rep.class_rank_histogram);
  out["aut_histogram"] = detail::histogram_json(rep.aut_histogram);
  json records = json::array();
  for (const auto& r : rep.records) {
    json j;
    j["digest"] = r.digest;
    j["index"] = r.index;
    j["params"] = {{"v", r.params.v}, {"b", r.params.b}, {"r", r.params.r}, {"k", r.params.k}, {"lambda", r.params.lambda}};
    json ranks = json::object();
    for (auto [p, rank] : r.p_ranks) ranks[std::to_string(p)] = rank;
    j["p_ranks"] = ranks;
    j["aut_order"] = r.aut_order.str();
    j["self_dual"] = r.self_dual ? json(*r.self_dual) : json(nullptr);
    j["hadamard_digest"] = r.hadamard_digest ? json(*r.hadamard_digest) : json(nullptr);
    records.push_back(std::move(j));
  }
  out["records"] = std::move(records);
  return out;
}

inline void write_report_text(std::ostream& out, const ClassificationReport& rep) {
  out << "designs: " << rep.design_count << "\n";
  out << "isomorphism classes: " << rep.class_count << "\n";
  if (rep.hadamard_class_count) out << "hadamard classes: " << *rep.hadamard_class_count << "\n";
  for (const auto& [p, hist] : rep.rank_histogram) {
    out << p << "-rank (all designs):";
    for (auto [rank, n] : hist) out << ' ' << rank << ':' << n;
    out << "\n" << p << "-rank (classes):";
    for (auto [rank, n] : rep.class_rank_histogram.at(p)) out << ' ' << rank << ':' << n;
    out << "\n";
  }
  out << "aut order (classes):";
  for (const auto& [order, n] : rep.aut_histogram) out << ' ' << order << ':' << n;
  out << "\n\n";

  out << std::left << std::setw(6) << "index" << std::setw(18) << "digest" << std::setw(12) << "aut";
  for (const auto& [p, hist] : rep.rank_histogram) out << std::setw(8) << (std::to_string(p) + "-rank");
  out << std::setw(10) << "selfdual" << "hadamard\n";
  for (const auto& r : rep.records) {
    out << std::setw(6) << r.index << std::setw(18) << r.digest.substr(0, 16) << std::setw(12) << r.aut_order.str();
    for (auto [p, rank] : r.p_ranks) out << std::setw(8) << rank;
    out << std::setw(10) << (r.self_dual ? (*r.self_dual ? "yes" : "no") : "-")
        << (r.hadamard_digest ? r.hadamard_digest->substr(0, 16) : std::string("-")) << "\n";
  }
  out << std::right;
}

/// Starting matrix -> Menon design -> closure over the diagonal switching
/// sets. Entry 0 of the result is the starting design.
inline std::vector<IncidenceStructure> bush_closure(const SignMatrix& start) {
  const SignMatrix h = with_positive_row_sum(start);
  const std::size_t n = menon_parameter(h.order());
  if (n == 0) throw design_error(errc::order_mismatch, "order " + std::to_string(h.order()) + " is not 4n^2");
  if (!is_bush_type(h, n)) throw design_error(errc::not_bush_structured, "starting matrix is not of Bush type");
  const IncidenceStructure d = hadamard_to_menon(h);
  return switching_closure(d, diagonal_switching_sets(d, n));
}

/// Published statistics of a switching closure, checked against a report.
struct GoldenExpectation {
  std::string id;
  std::string fixture;  // file name under the literature fixture directory
  std::size_t order = 0;
  std::uint32_t prime = 0;
  std::size_t designs = 0;
  std::size_t classes = 0;
  std::size_t hadamard_classes = 0;
  std::map<BigInt, std::size_t> aut_classes;
  /// Entries the rank histogram must contain; `over_classes` selects the
  /// per-class histogram.
  Histogram ranks;
  bool over_classes = false;
  std::optional<std::size_t> start_rank;
};

inline const std::vector<GoldenExpectation>& golden_expectations() {
  static const std::vector<GoldenExpectation> table = [] {
    std::vector<GoldenExpectation> t;
    GoldenExpectation a;
    a.id = "order36-negacyclic";
    a.fixture = "bush36_negacyclic.had";
    a.order = 36;
    a.prime = 3;
    a.designs = 64;
    a.classes = 64;
    a.hadamard_classes = 14;
    a.aut_classes = {{1, 64}};
    a.ranks = {{16, 10}, {17, 28}, {18, 18}};
    a.start_rank = 15;
    t.push_back(a);

    GoldenExpectation b;
    b.id = "order36-z3";
    b.fixture = "bush36_z3.had";
    b.order = 36;
    b.prime = 3;
    b.designs = 64;
    b.classes = 24;
    b.hadamard_classes = 16;
    b.aut_classes = {{1, 20}, {3, 4}};
    b.ranks = {{15, 1}, {16, 5}, {17, 10}, {18, 8}};
    b.over_classes = true;
    b.start_rank = 16;
    t.push_back(b);

    GoldenExpectation c;
    c.id = "order100";
    c.fixture = "bush100.had";
    c.order = 100;
    c.prime = 5;
    c.designs = 1024;
    c.classes = 208;
    c.hadamard_classes = 120;
    c.aut_classes = {{20, 204}, {100, 4}};
    c.ranks = {{38, 2}, {39, 4}, {40, 20}, {41, 64}, {42, 118}};
    c.over_classes = true;
    t.push_back(c);
    return t;
  }();
  return table;
}

inline const GoldenExpectation& golden_expectation(const std::string& id) {
  for (const auto& g : golden_expectations())
    if (g.id == id) return g;
  throw design_error(errc::invalid_argument, "unknown golden case \"" + id + "\"");
}

/// Mismatches between a closure report and the expectation (empty = match).
inline std::vector<std::string> compare_golden(const GoldenExpectation& g, const ClassificationReport& rep) {
  std::vector<std::string> bad;
  auto expect = [&](const std::string& what, auto want, auto got) {
    if (want != got) {
      std::ostringstream s;
      s << what << ": expected " << want << ", got " << got;
      bad.push_back(s.str());
    }
  };
  expect("designs", g.designs, rep.design_count);
  expect("isomorphism classes", g.classes, rep.class_count);
  expect("hadamard classes", g.hadamard_classes, rep.hadamard_class_count.value_or(0));
  for (const auto& [order, n] : g.aut_classes) {
    auto it = rep.aut_histogram.find(order);
    expect("classes with aut order " + order.str(), n, it == rep.aut_histogram.end() ? 0 : it->second);
  }
  std::size_t aut_total = 0;
  for (const auto& [order, n] : rep.aut_histogram) aut_total += g.aut_classes.count(order) ? 0 : n;
  expect("classes with other aut orders", std::size_t{0}, aut_total);

  const auto& hists = g.over_classes ? rep.class_rank_histogram : rep.rank_histogram;
  const auto hit = hists.find(g.prime);
  for (const auto& [rank, n] : g.ranks) {
    std::size_t got = 0;
    if (hit != hists.end() && hit->second.count(rank)) got = hit->second.at(rank);
    expect(std::to_string(g.prime) + "-rank " + std::to_string(rank), n, got);
  }
  if (g.start_rank) {
    const auto& start = rep.record_for(0);
    expect("starting design " + std::to_string(g.prime) + "-rank", *g.start_rank,
           start.p_ranks.count(g.prime) ? start.p_ranks.at(g.prime) : 0);
  }
  return bad;
}

}  // namespace dsw

#endif
