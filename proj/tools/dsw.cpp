// dsw: command-line front end for the designswitch library.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <designswitch.hpp>

namespace {

using namespace dsw;

constexpr int exit_domain = 1;
constexpr int exit_usage = 2;
constexpr int exit_missing_fixture = 3;

struct missing_fixture : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Whole input of a path, "-" meaning stdin.
std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw design_error(errc::invalid_argument, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<IncidenceStructure> read_designs(const std::string& path) {
  std::istringstream in(slurp(path));
  auto out = parse_incidence_stream(in);
  if (out.empty()) throw design_error(errc::parse_error, path + ": no incidence structure");
  return out;
}

IncidenceStructure read_design(const std::string& path) { return read_designs(path).front(); }

SignMatrix read_sign(const std::string& path) {
  std::istringstream in(slurp(path));
  return parse_sign_matrix(in);
}

OrbitMatrix read_orbit(const std::string& path) {
  std::istringstream in(slurp(path));
  return parse_orbit_matrix(in);
}

std::vector<std::vector<std::size_t>> switching_lines(const std::string& path) {
  std::istringstream in(slurp(path));
  return parse_switching_lines(in);
}

// Output stream for an optional -o path.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw design_error(errc::invalid_argument, "cannot write " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string join(const std::vector<std::size_t>& xs, const char* sep = " ") {
  std::ostringstream s;
  for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? sep : "") << xs[i];
  return s.str();
}

void print_partition(std::ostream& out, const SwitchingSet& sw) {
  out << "blocks: " << join(sw.blocks) << "\n";
  out << "P1: " << join(sw.p1) << "\n";
  out << "P2: " << join(sw.p2) << "\n";
  out << "balanced: " << join(sw.balanced) << "\n";
}

std::vector<std::uint32_t> parse_primes(const std::vector<std::uint32_t>& primes) {
  for (std::uint32_t p : primes)
    if (!is_prime(p)) throw design_error(errc::not_prime, std::to_string(p) + " is not prime");
  return primes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching sets, Bush-type Hadamard matrices and design classification"};
  app.require_subcommand(1);
  std::string input;
  std::string second;
  std::string output;
  std::size_t index = 0;
  std::size_t n = 0;
  std::vector<std::size_t> blocks;
  std::vector<std::uint32_t> primes;

  auto* validate = app.add_subcommand("validate", "Check the 2-design axioms of every structure in a file");
  validate->add_option("file", input, "Incidence fixture, - for stdin")->required();

  auto* dual_cmd = app.add_subcommand("dual", "Write the dual structure");
  dual_cmd->add_option("file", input)->required();
  dual_cmd->add_option("-o,--out", output, "Output file");

  auto* derived = app.add_subcommand("derived", "Derived design at a block of a symmetric design");
  derived->add_option("file", input)->required();
  derived->add_option("--block", index, "Block index (0-based)")->required();
  derived->add_option("-o,--out", output);

  auto* sw_cmd = app.add_subcommand("switch", "Switch with respect to a block set");
  sw_cmd->add_option("file", input)->required();
  sw_cmd->add_option("--blocks", blocks, "Block indices; default: every S: line of the file")->delimiter(',');
  sw_cmd->add_option("-o,--out", output);
  bool show_partition = false;
  sw_cmd->add_flag("--partition", show_partition, "Print the point partition to stderr");

  auto* enumerate = app.add_subcommand("enumerate", "List switching sets as S: lines");
  enumerate->add_option("file", input)->required();
  std::size_t max_size = 2;
  enumerate->add_option("--max-size", max_size, "Largest set size")->capture_default_str();
  std::size_t bush_groups = 0;
  enumerate->add_option("--bush", bush_groups, "Only unions of the diagonal block rows of a Menon design of order 4n^2");
  std::uint64_t budget = 50'000'000;
  enumerate->add_option("--budget", budget, "Search-node limit, 0 for none")->capture_default_str();

  auto* closure = app.add_subcommand("closure", "All designs obtained from disjoint switching sets");
  closure->add_option("file", input)->required();
  std::size_t closure_bush = 0;
  closure->add_option("--bush", closure_bush, "Use the 2n diagonal switching sets of a Menon design of order 4n^2");
  closure->add_option("-o,--out", output);

  auto* rank = app.add_subcommand("rank", "p-rank of every structure in a file");
  rank->add_option("file", input)->required();
  rank->add_option("-p,--prime", primes, "Primes")->delimiter(',')->required();

  auto* certify = app.add_subcommand("certify", "Certificate digest and automorphism group order");
  certify->add_option("file", input)->required();

  auto* aut = app.add_subcommand("aut", "Automorphism group order");
  aut->add_option("file", input)->required();

  auto* selfdual = app.add_subcommand("selfdual", "Whether a symmetric design is isomorphic to its dual");
  selfdual->add_option("file", input)->required();

  auto* had = app.add_subcommand("hadamard", "Hadamard and Bush-type matrices");
  had->alias("bush");
  had->require_subcommand(1);
  auto* h_check = had->add_subcommand("check", "Report Hadamard, regular, Bush-type and block negacyclic");
  h_check->add_option("file", input)->required();
  auto* h_to = had->add_subcommand("to-design", "Menon design of a regular Hadamard matrix");
  h_to->add_option("file", input)->required();
  bool normalize = false;
  h_to->add_flag("--normalize", normalize, "Negate the matrix first when its row sums are negative");
  h_to->add_option("-o,--out", output);
  auto* h_from = had->add_subcommand("from-design", "Hadamard matrix of a (4n^2, 2n^2-n, n^2-n) design");
  h_from->add_option("file", input)->required();
  h_from->add_option("-n", n, "Half block size")->required();
  h_from->add_option("-o,--out", output);
  auto* h_search = had->add_subcommand("search", "Backtracking search for Bush-type matrices of order 4n^2");
  h_search->add_option("-n", n, "Half block size")->required();
  std::string symmetry = "free";
  h_search->add_option("--symmetry", symmetry, "free or negacyclic")
      ->check(CLI::IsMember({"free", "negacyclic"}))
      ->capture_default_str();
  std::size_t limit = 1;
  h_search->add_option("--limit", limit, "Maximum number of matrices")->capture_default_str();
  std::uint64_t search_budget = BushSearchOptions{}.node_budget;
  h_search->add_option("--budget", search_budget, "Search-node limit, 0 for none")->capture_default_str();
  h_search->add_option("-o,--out", output);
  auto* h_cert = had->add_subcommand("certify", "Equivalence-class digest");
  h_cert->add_option("file", input)->required();

  auto* orbit = app.add_subcommand("orbit", "Orbit matrices");
  orbit->require_subcommand(1);
  auto* o_validate = orbit->add_subcommand("validate", "Check the orbit-matrix counting identities");
  o_validate->add_option("file", input)->required();
  auto* o_switch = orbit->add_subcommand("switch", "Switch on a set of block-orbit rows");
  o_switch->add_option("file", input)->required();
  std::vector<std::size_t> rows;
  o_switch->add_option("--rows", rows, "Row indices (0-based)")->delimiter(',')->required();
  o_switch->add_option("-o,--out", output);
  auto* o_equiv = orbit->add_subcommand("equiv", "Search row and column permutations relating two orbit matrices");
  o_equiv->add_option("first", input)->required();
  o_equiv->add_option("second", second)->required();
  auto* o_cand = orbit->add_subcommand("candidates", "Row sets on which orbit switching is defined");
  o_cand->add_option("file", input)->required();
  std::size_t max_rows = 8;
  o_cand->add_option("--max-rows", max_rows, "Largest total block count")->capture_default_str();

  auto* classify_cmd = app.add_subcommand("classify", "Isomorphism classes, p-ranks and automorphism groups");
  std::vector<std::string> inputs;
  classify_cmd->add_option("files", inputs, "Incidence fixtures (- for stdin)");
  classify_cmd->add_option("-p,--prime", primes, "Primes for p-ranks")->delimiter(',');
  std::size_t jobs = 0;
  classify_cmd->add_option("--jobs", jobs, "Worker threads, 0 = available parallelism")->capture_default_str();
  std::string report_path;
  classify_cmd->add_option("--out", report_path, "Structured (JSON) report path");
  std::string reps_path;
  classify_cmd->add_option("--representatives", reps_path, "Write one design per class to this file");
  bool from_bush = false;
  classify_cmd->add_flag("--bush", from_bush, "Inputs are Bush-type Hadamard matrices; classify their closures");
  std::string golden;
  classify_cmd->add_option("--golden", golden, "Compare with a published closure: order36-negacyclic, order36-z3, order100");
  std::string fixture;
  classify_cmd->add_option("--fixture", fixture, "Starting matrix for --golden");
  bool no_hadamard = false;
  classify_cmd->add_flag("--no-hadamard", no_hadamard, "Skip Hadamard certificates of Menon designs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (validate->parsed()) {
      int status = 0;
      const auto designs = read_designs(input);
      for (std::size_t i = 0; i < designs.size(); ++i) {
        try {
          std::cout << to_string(validate_2design(designs[i])) << "\n";
        } catch (const design_error& e) {
          std::cout << "design " << i << ": " << e.what() << "\n";
          status = exit_domain;
        }
      }
      return status;
    }
    if (dual_cmd->parsed()) {
      Output out(output);
      for (const auto& d : read_designs(input)) write_incidence(out.get(), dual(d));
      return 0;
    }
    if (derived->parsed()) {
      Output out(output);
      write_incidence(out.get(), derived_design(read_design(input), index));
      return 0;
    }
    if (sw_cmd->parsed()) {
      IncidenceStructure d = read_design(input);
      validate_2design(d);
      std::vector<std::vector<std::size_t>> sets;
      if (!blocks.empty())
        sets.push_back(blocks);
      else
        sets = switching_lines(input);
      if (sets.empty()) throw design_error(errc::invalid_argument, "no --blocks given and no S: lines in " + input);
      for (const auto& s : sets) {
        const SwitchingSet sw = analyze_block_set(d, s);
        if (show_partition) print_partition(std::cerr, sw);
        d = apply_switching(d, sw);
      }
      Output out(output);
      write_incidence(out.get(), d);
      return 0;
    }
    if (enumerate->parsed()) {
      const IncidenceStructure d = read_design(input);
      validate_2design(d);
      EnumerationOptions opt;
      opt.max_size = max_size;
      opt.node_budget = budget;
      if (bush_groups != 0) {
        opt.strategy = EnumerationOptions::Strategy::grouped;
        opt.groups = bush_block_groups(bush_groups);
        if (d.b() != 4 * bush_groups * bush_groups)
          throw design_error(errc::order_mismatch, "design has " + std::to_string(d.b()) + " blocks");
      }
      std::size_t count = 0;
      for_each_switching_set(d, opt, [&](const SwitchingSet& sw) {
        std::cout << format_switching_line(sw) << "\n";
        ++count;
        return true;
      });
      std::cerr << count << " switching sets\n";
      return 0;
    }
    if (closure->parsed()) {
      const IncidenceStructure d = read_design(input);
      std::vector<SwitchingSet> sets;
      if (closure_bush != 0) {
        sets = diagonal_switching_sets(d, closure_bush);
      } else {
        validate_2design(d);
        for (const auto& s : switching_lines(input)) sets.push_back(analyze_block_set(d, s));
      }
      Output out(output);
      for (const auto& x : switching_closure(d, sets)) write_incidence(out.get(), x);
      return 0;
    }
    if (rank->parsed()) {
      parse_primes(primes);
      const auto designs = read_designs(input);
      for (std::uint32_t p : primes) {
        for (std::size_t i = 0; i < designs.size(); ++i)
          std::cout << "design " << i << ": " << p << "-rank " << p_rank(designs[i], p) << "\n";
        if (designs.size() > 1) {
          std::cout << p << "-rank histogram:";
          for (auto [r, c] : rank_distribution(designs, p)) std::cout << ' ' << r << ':' << c;
          std::cout << "\n";
        }
      }
      return 0;
    }
    if (certify->parsed()) {
      for (const auto& d : read_designs(input)) {
        const Certificate c = design_certificate(d);
        std::cout << c.digest() << " " << c.group_order << "\n";
      }
      return 0;
    }
    if (aut->parsed()) {
      for (const auto& d : read_designs(input)) std::cout << aut_group_order(d) << "\n";
      return 0;
    }
    if (selfdual->parsed()) {
      for (const auto& d : read_designs(input)) std::cout << (is_self_dual(d) ? "self-dual" : "not self-dual") << "\n";
      return 0;
    }
    if (h_check->parsed()) {
      const SignMatrix h = read_sign(input);
      const std::size_t u = menon_parameter(h.order());
      std::cout << "order: " << h.order() << "\n";
      std::cout << "hadamard: " << (is_hadamard(h) ? "yes" : "no") << "\n";
      std::cout << "regular: " << (is_regular(h) ? "yes" : "no") << "\n";
      if (u != 0) {
        std::cout << "bush-type (n=" << u << "): " << (is_bush_type(h, u) ? "yes" : "no") << "\n";
        std::cout << "block negacyclic: " << (is_block_negacyclic(h, u) ? "yes" : "no") << "\n";
      }
      return 0;
    }
    if (h_to->parsed()) {
      SignMatrix h = read_sign(input);
      if (normalize) h = with_positive_row_sum(h);
      Output out(output);
      write_incidence(out.get(), hadamard_to_menon(h));
      return 0;
    }
    if (h_from->parsed()) {
      Output out(output);
      write_sign_matrix(out.get(), menon_to_hadamard(read_design(input), n));
      return 0;
    }
    if (h_search->parsed()) {
      BushSearchOptions opt;
      opt.n = n;
      opt.symmetry = symmetry == "negacyclic" ? BushSymmetry::block_negacyclic : BushSymmetry::free;
      opt.limit = limit;
      opt.node_budget = search_budget;
      Output out(output);
      std::size_t count = 0;
      search_bush_type(opt, [&](const SignMatrix& h) {
        write_sign_matrix(out.get(), h);
        out.get().flush();
        ++count;
        return true;
      });
      std::cerr << count << " matrices\n";
      return 0;
    }
    if (h_cert->parsed()) {
      const Certificate c = hadamard_certificate(read_sign(input));
      std::cout << c.digest() << " " << c.group_order << "\n";
      return 0;
    }
    if (o_validate->parsed()) {
      const OrbitMatrix om = read_orbit(input);
      const auto rep = validate_orbit_matrix(om);
      std::cout << to_string(om.params) << "\n";
      for (const auto& f : rep.failures) std::cout << f.describe() << "\n";
      std::cout << (rep.ok() ? "all identities hold" : std::to_string(rep.failures.size()) + " failures") << "\n";
      return rep.ok() ? 0 : exit_domain;
    }
    if (o_switch->parsed()) {
      Output out(output);
      write_orbit_matrix(out.get(), orbit_switching(read_orbit(input), rows));
      return 0;
    }
    if (o_equiv->parsed()) {
      const auto w = orbit_matrices_equivalent(read_orbit(input), read_orbit(second));
      if (!w) {
        std::cout << "not equivalent\n";
        return 0;
      }
      std::cout << "equivalent\n";
      std::cout << "rows: " << join(w->row_perm) << "\n";
      std::cout << "columns: " << join(w->col_perm) << "\n";
      return 0;
    }
    if (o_cand->parsed()) {
      for (const auto& r : orbit_switching_candidates(read_orbit(input), max_rows)) std::cout << join(r) << "\n";
      return 0;
    }
    if (classify_cmd->parsed()) {
      ClassifyOptions opt;
      opt.primes = parse_primes(primes);
      opt.jobs = jobs;
      opt.hadamard = !no_hadamard;
      std::vector<IncidenceStructure> designs;
      const GoldenExpectation* expect = nullptr;
      if (!golden.empty()) {
        expect = &golden_expectation(golden);
        const std::string path = fixture.empty() ? "fixtures/literature/" + expect->fixture : fixture;
        if (!std::ifstream(path)) throw missing_fixture(path);
        designs = bush_closure(read_sign(path));
        if (std::find(opt.primes.begin(), opt.primes.end(), expect->prime) == opt.primes.end())
          opt.primes.push_back(expect->prime);
      } else {
        if (inputs.empty()) throw CLI::ValidationError("classify", "no input files");
        for (const auto& path : inputs) {
          if (from_bush) {
            for (auto& d : bush_closure(read_sign(path))) designs.push_back(std::move(d));
          } else {
            for (auto& d : read_designs(path)) designs.push_back(std::move(d));
          }
        }
      }
      const ClassificationReport rep = classify(designs, opt);
      write_report_text(std::cout, rep);
      if (!report_path.empty()) {
        Output out(report_path);
        out.get() << to_json(rep).dump(2) << "\n";
      }
      if (!reps_path.empty()) {
        Output out(reps_path);
        for (const auto* r : rep.representatives()) write_incidence(out.get(), designs[r->index]);
      }
      if (expect) {
        const auto bad = compare_golden(*expect, rep);
        for (const auto& line : bad) std::cout << "mismatch: " << line << "\n";
        std::cout << "golden " << expect->id << ": " << (bad.empty() ? "match" : "MISMATCH") << "\n";
        return bad.empty() ? 0 : exit_domain;
      }
      return 0;
    }
  } catch (const missing_fixture& e) {
    std::cerr << "fixture missing: " << e.what() << "\n";
    return exit_missing_fixture;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return exit_usage;
  } catch (const design_error& e) {
    std::cerr << e.what() << "\n";
    return exit_domain;
  }
  return exit_usage;
}
