#include "hd0l/io.hpp"

#include <json.hpp>

#include <set>

namespace hd0l {

namespace {

using Json = nlohmann::ordered_json;

class Problems {
public:
  void add(std::string where, std::string what) {
    lines_.push_back(where.empty() ? what : where + ": " + what);
  }
  bool empty() const { return lines_.empty(); }
  [[noreturn]] void raise() const {
    std::string msg;
    for (const auto& l : lines_)
      msg += (msg.empty() ? "" : "\n") + l;
    throw ValidationError(msg);
  }

private:
  std::vector<std::string> lines_;
};

std::optional<Alphabet> read_alphabet(const Json& doc, const char* key, Problems& out) {
  const Json& j = doc[key];
  if (!j.is_array()) {
    out.add(key, "must be a list of letter strings");
    return std::nullopt;
  }
  std::vector<Letter> letters;
  std::set<std::string> seen;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!j[i].is_string() || j[i].get<std::string>().empty()) {
      out.add(where, "letters must be non-empty strings");
      ok = false;
      continue;
    }
    auto name = j[i].get<std::string>();
    if (!seen.insert(name).second) {
      out.add(where, "letter \"" + name + "\" declared twice");
      ok = false;
      continue;
    }
    letters.push_back(Letter::intern(name));
  }
  if (letters.empty() && ok) {
    out.add(key, "alphabet must not be empty");
    ok = false;
  }
  if (!ok)
    return std::nullopt;
  return Alphabet(std::move(letters));
}

std::optional<Word> read_word(const Json& j, const std::string& where,
                              const std::optional<Alphabet>& over, const char* over_name,
                              Problems& out) {
  if (!j.is_array()) {
    out.add(where, "must be a list of letters");
    return std::nullopt;
  }
  std::vector<Letter> letters;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_string()) {
      out.add(at, "letters must be strings");
      ok = false;
      continue;
    }
    auto name = j[i].get<std::string>();
    Letter l = Letter::intern(name);
    if (over && !over->contains(l)) {
      out.add(at, "letter \"" + name + "\" is not declared in " + over_name);
      ok = false;
      continue;
    }
    letters.push_back(l);
  }
  if (!ok)
    return std::nullopt;
  return Word(std::move(letters));
}

std::optional<Morphism> read_morphism(const Json& doc, const char* key,
                                      const std::optional<Alphabet>& from,
                                      const std::optional<Alphabet>& to, const char* to_name,
                                      Problems& out) {
  const Json& j = doc[key];
  if (!j.is_object()) {
    out.add(key, "must map letters to lists of letters");
    return std::nullopt;
  }
  std::map<std::string, Word> images;
  bool ok = true;
  for (const auto& [name, value] : j.items()) {
    const std::string where = std::string(key) + "." + name;
    if (from && !from->contains(Letter::intern(name))) {
      out.add(where, "letter \"" + name + "\" is not declared in A");
      ok = false;
    }
    auto w = read_word(value, where, to, to_name, out);
    if (!w)
      ok = false;
    else
      images.emplace(name, std::move(*w));
  }
  if (!from)
    return std::nullopt;
  for (Letter l : *from)
    if (!images.count(l.name())) {
      out.add(key, "no image for letter \"" + l.name() + "\"");
      ok = false;
    }
  if (!ok || !to)
    return std::nullopt;
  std::vector<Word> ordered;
  for (Letter l : *from)
    ordered.push_back(images.at(l.name()));
  return Morphism(*from, *to, std::move(ordered));
}

Json word_json(const Word& w) {
  Json out = Json::array();
  for (Letter l : w)
    out.push_back(l.name());
  return out;
}

Json morphism_json(const Morphism& m) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.domain().size(); ++i)
    out[m.domain()[i].name()] = word_json(m.image_at(i));
  return out;
}

Json alphabet_json(const Alphabet& a) {
  Json out = Json::array();
  for (Letter l : a)
    out.push_back(l.name());
  return out;
}

} // namespace

HD0LSystem parse_system(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed document: ") + e.what());
  }
  Problems problems;
  if (!doc.is_object()) {
    problems.add("", "document must be a JSON object");
    problems.raise();
  }
  static const std::set<std::string> members{"A", "B", "sigma", "phi", "w"};
  for (const auto& [key, value] : doc.items())
    if (!members.count(key))
      problems.add(key, "unknown member");
  for (const auto& key : {"A", "B", "sigma", "phi", "w"})
    if (!doc.contains(key))
      problems.add(key, "missing member");
  if (!problems.empty())
    problems.raise();

  auto A = read_alphabet(doc, "A", problems);
  auto B = read_alphabet(doc, "B", problems);
  auto sigma = read_morphism(doc, "sigma", A, A, "A", problems);
  auto phi = read_morphism(doc, "phi", A, B, "B", problems);
  auto w = read_word(doc["w"], "w", A, "A", problems);
  if (w && w->empty())
    problems.add("w", "w must be non-empty");
  if (!problems.empty())
    problems.raise();

  HD0LSystem out{*A, *B, *sigma, *phi, *w};
  out.validate();
  return out;
}

std::string serialize_system(const HD0LSystem& system, int indent) {
  Json doc;
  doc["A"] = alphabet_json(system.A);
  doc["B"] = alphabet_json(system.B);
  doc["sigma"] = morphism_json(system.sigma);
  doc["phi"] = morphism_json(system.phi);
  doc["w"] = word_json(system.w);
  return doc.dump(indent);
}

std::string verdict_document(const DecisionOutcome& outcome, int indent) {
  Json doc;
  doc["answer"] = outcome.inconclusive ? "inconclusive" : outcome.periodic ? "yes" : "no";
  if (outcome.periodic && outcome.witness) {
    doc["u"] = word_json(outcome.witness->preperiod);
    doc["v"] = word_json(outcome.witness->period);
  }
  doc["certified"] = outcome.certified;
  doc["diagnostic"] = outcome.diagnostic ? to_string(*outcome.diagnostic) : "";
  Json trace = Json::array();
  for (std::size_t i = 0; i < outcome.trace.size(); ++i)
    trace.push_back({{"step", i + 1}, {"note", outcome.trace[i]}});
  doc["trace"] = std::move(trace);
  return doc.dump(indent);
}

std::string representation_document(const SubstitutiveRepresentation& rep, int indent) {
  Json doc;
  doc["letters"] = alphabet_json(rep.tau.domain());
  doc["tau"] = morphism_json(rep.tau);
  doc["kappa"] = morphism_json(rep.kappa);
  doc["seed"] = rep.seed.name();
  Json props = Json::array();
  for (auto p : rep.certified)
    props.push_back(to_string(p));
  doc["certified"] = std::move(props);
  return doc.dump(indent);
}

std::string analysis_document(const Morphism& sigma, int indent) {
  const auto d = component_decomposition(sigma);
  const auto cls = classify_letters(sigma);
  Json doc;
  doc["power"] = d.power;
  doc["non_principal"] = d.non_principal;
  Json comps = Json::array();
  for (const auto& c : d.components) {
    Json letters = Json::array();
    for (Letter l : c.letters)
      letters.push_back(l.name());
    comps.push_back({{"letters", letters}, {"class", to_string(c.kind)}, {"principal", c.principal}});
  }
  doc["components"] = std::move(comps);
  Json letters = Json::object();
  for (Letter l : sigma.domain())
    letters[l.name()] = {{"growing", cls[l].growing},
                         {"erasing", cls[l].erasing},
                         {"mortal", cls[l].mortal}};
  doc["letters"] = std::move(letters);
  return doc.dump(indent);
}

} // namespace hd0l
