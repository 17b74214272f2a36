#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hd0l/corpus.hpp"
#include "hd0l/io.hpp"

using namespace hd0l;

namespace {

enum Exit { Yes = 0, Failed = 1, Invalid = 2, No = 3, Inconclusive = 4, Internal = 5 };

HD0LSystem load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

int decide(const std::string& path, std::optional<std::size_t> bound, bool json, bool trace) {
  DecisionConfig config;
  config.primitive_bound = bound;
  const auto out = decide_hd0l(load(path), config);
  if (json) {
    auto shown = out;
    if (!trace)
      shown.trace.clear();
    std::cout << verdict_document(shown) << "\n";
  } else {
    if (out.inconclusive)
      std::cout << "inconclusive\n";
    else if (out.periodic)
      std::cout << "yes u=" << to_string(out.witness->preperiod)
                << " v=" << to_string(out.witness->period) << "\n";
    else
      std::cout << "no (" << to_string(*out.diagnostic)
                << (out.certified ? "" : ", bound-limited") << ")\n";
    if (trace)
      for (const auto& line : out.trace)
        std::cout << "  " << line << "\n";
  }
  return out.inconclusive ? Inconclusive : out.periodic ? Yes : No;
}

int expand(const std::string& path, std::size_t length) {
  const auto analysis = class_limits(load(path));
  std::vector<Word> seen;
  for (const auto& c : analysis.classes) {
    Word x = c.prefix(length);
    if (std::find(seen.begin(), seen.end(), x) != seen.end())
      continue;
    seen.push_back(x);
  }
  if (seen.size() == 1) {
    std::cout << to_string(seen.front()) << "\n";
    return Yes;
  }
  for (const auto& c : analysis.classes)
    std::cout << "n = " << c.couple << " + " << analysis.exponent << "*(" << c.offset + c.residue
              << " + " << c.modulus << "t): " << to_string(c.prefix(length)) << "\n";
  return Yes;
}

int normalize_cmd(const std::string& path) {
  const auto system = load(path);
  if (system.w.size() == 1 && is_prolongable(system.sigma, system.w.front())) {
    auto n = normalize(system.sigma, system.phi, system.w.front());
    if (n.bounded()) {
      std::cout << "finite image: " << to_string(n.finite_image) << "\n";
      return Yes;
    }
    std::cout << representation_document(*n.rep) << "\n";
    return Yes;
  }
  // otherwise one representation per class limit
  const auto analysis = class_limits(system);
  for (const auto& c : analysis.classes) {
    std::cout << "class n = " << c.couple << " + " << analysis.exponent << "*("
              << c.offset + c.residue << " + " << c.modulus << "t), prefix "
              << to_string(c.prefix_word) << "\n";
    if (c.periodic_tail)
      std::cout << "periodic tail " << to_string(*c.periodic_tail) << "\n";
    else
      std::cout << representation_document(*c.tail) << "\n";
  }
  return Yes;
}

int run_corpus_cmd(std::optional<std::size_t> bound) {
  DecisionConfig config;
  config.primitive_bound = bound;
  const auto results = run_corpus(config);
  bool all = true;
  std::cout << std::left << std::setw(26) << "system" << std::setw(8) << "result"
            << std::setw(10) << "seconds" << "verdict\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all = all && r.pass;
    std::string verdict = r.outcome.inconclusive ? "inconclusive"
                          : r.outcome.periodic   ? "yes " + to_string(*r.outcome.witness)
                                                 : std::string("no ") +
                                                     to_string(*r.outcome.diagnostic);
    std::cout << std::setw(26) << r.name << std::setw(8) << (r.pass ? "pass" : "FAIL")
              << std::setw(10) << std::fixed << std::setprecision(3) << r.seconds << verdict
              << "\n";
  }
  return all ? Yes : Failed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultimate periodicity of HD0L systems"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::size_t> bound;
  bool json = false, trace = false;
  std::size_t length = 100;

  auto* dec = app.add_subcommand("decide", "decide whether the limit is ultimately periodic");
  dec->add_option("file", file, "system document")->required();
  dec->add_option("--primitive-bound", bound, "period search bound for primitive components");
  dec->add_flag("--json", json, "print the verdict document");
  dec->add_flag("--trace", trace, "include the decision trace");

  auto* exp = app.add_subcommand("expand", "print a prefix of the limit of every class");
  exp->add_option("file", file, "system document")->required();
  exp->add_option("--length", length, "prefix length")->required();

  auto* ana = app.add_subcommand("analyze", "component decomposition and letter classes");
  ana->add_option("file", file, "system document")->required();

  auto* nor = app.add_subcommand("normalize", "print the coding representation");
  nor->add_option("file", file, "system document")->required();

  auto* cor = app.add_subcommand("corpus", "run the bundled regression systems");
  cor->add_option("--primitive-bound", bound, "period search bound for primitive components");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : Invalid;
  }

  try {
    if (*dec)
      return decide(file, bound, json, trace);
    if (*exp)
      return expand(file, length);
    if (*ana) {
      std::cout << analysis_document(load(file).sigma) << "\n";
      return Yes;
    }
    if (*nor)
      return normalize_cmd(file);
    return run_corpus_cmd(bound);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input:\n" << e.what() << "\n";
    return Invalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return Invalid;
  } catch (const PreconditionError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return Invalid;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return Inconclusive;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return Internal;
  }
}
