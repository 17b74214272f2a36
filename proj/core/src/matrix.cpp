#include "hd0l/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace hd0l {

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

// Edge j -> i whenever s[i][j] is set.
Graph graph_of(const SupportMatrix& s) {
  Graph g(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    g[j] = s.column(j);
  return g;
}

// Tarjan, iterative. Components come out sinks first.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Graph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnset = SIZE_MAX;
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset)
      continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.next < g[f.v].size()) {
        std::size_t w = g[f.v][f.next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty())
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

// gcd of level(u)+1-level(v) over internal edges; 0 when the component has
// no cycle at all.
std::uint64_t cyclicity_index(const Graph& g, const std::vector<std::size_t>& comp,
                              const std::vector<std::size_t>& comp_id, std::size_t id) {
  std::vector<std::int64_t> level(g.size(), -1);
  std::queue<std::size_t> q;
  level[comp[0]] = 0;
  q.push(comp[0]);
  std::uint64_t h = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : g[u]) {
      if (comp_id[v] != id)
        continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        auto d = level[u] + 1 - level[v];
        h = std::gcd(h, static_cast<std::uint64_t>(d < 0 ? -d : d));
      }
    }
  }
  return h;
}

std::vector<std::size_t> component_ids(const std::vector<std::vector<std::size_t>>& comps,
                                       std::size_t n) {
  std::vector<std::size_t> id(n, 0);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto v : comps[c])
      id[v] = c;
  return id;
}

bool block_all_true(const SupportMatrix& s, const std::vector<std::size_t>& comp) {
  for (auto i : comp)
    for (auto j : comp)
      if (!s.at(i, j))
        return false;
  return true;
}

// Diagonal entry of incidence(sigma^p) at letter idx; walks from idx back to
// itself never leave its strongly connected component.
BigInt diagonal_count(const IncidenceMatrix& m, const std::vector<std::size_t>& scc,
                      std::size_t idx, std::uint64_t p) {
  const std::size_t k = scc.size();
  std::vector<BigInt> base(k * k), acc(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    acc[a * k + a] = 1;
    for (std::size_t b = 0; b < k; ++b)
      base[a * k + b] = m.at(scc[a], scc[b]);
  }
  auto mul = [k](const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
    std::vector<BigInt> z(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < k; ++t)
        if (x[i * k + t] != 0)
          for (std::size_t j = 0; j < k; ++j)
            z[i * k + j] += x[i * k + t] * y[t * k + j];
    return z;
  };
  while (p > 0) {
    if (p & 1)
      acc = mul(acc, base);
    p >>= 1;
    if (p > 0)
      base = mul(base, base);
  }
  auto pos = static_cast<std::size_t>(std::find(scc.begin(), scc.end(), idx) - scc.begin());
  return acc[pos * k + pos];
}

} // namespace

// ------------------------------------------------------------ SupportMatrix

SupportMatrix::SupportMatrix(std::size_t n)
    : n_(n), stride_((n + 63) / 64), rows_(n * ((n + 63) / 64), 0) {}

SupportMatrix SupportMatrix::identity(std::size_t n) {
  SupportMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    m.set(i, i);
  return m;
}

void SupportMatrix::set(std::size_t row, std::size_t col, bool value) {
  auto& word = rows_[row * stride_ + col / 64];
  auto bit = std::uint64_t{1} << (col % 64);
  word = value ? (word | bit) : (word & ~bit);
}

bool SupportMatrix::all_true() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (!at(i, j))
        return false;
  return true;
}

bool SupportMatrix::column_empty(std::size_t col) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (at(i, col))
      return false;
  return true;
}

std::vector<std::size_t> SupportMatrix::column(std::size_t col) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (at(i, col))
      out.push_back(i);
  return out;
}

SupportMatrix SupportMatrix::submatrix(const std::vector<std::size_t>& indices) const {
  SupportMatrix out(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = 0; b < indices.size(); ++b)
      if (at(indices[a], indices[b]))
        out.set(a, b);
  return out;
}

SupportMatrix operator*(const SupportMatrix& x, const SupportMatrix& y) {
  if (x.n_ != y.n_)
    throw DomainError("support matrix size mismatch");
  SupportMatrix z(x.n_);
  for (std::size_t i = 0; i < x.n_; ++i) {
    auto* out = &z.rows_[i * z.stride_];
    for (std::size_t k = 0; k < x.n_; ++k) {
      if (!x.at(i, k))
        continue;
      const auto* in = &y.rows_[k * y.stride_];
      for (std::size_t w = 0; w < z.stride_; ++w)
        out[w] |= in[w];
    }
  }
  return z;
}

SupportMatrix power(const SupportMatrix& m, std::uint64_t k) {
  SupportMatrix acc = SupportMatrix::identity(m.size());
  SupportMatrix base = m;
  while (k > 0) {
    if (k & 1)
      acc = acc * base;
    k >>= 1;
    if (k > 0)
      base = base * base;
  }
  return acc;
}

bool is_primitive(const SupportMatrix& m) {
  const std::uint64_t n = m.size();
  if (n == 0)
    return false;
  return power(m, n * n - 2 * n + 2).all_true();
}

// ---------------------------------------------------------- IncidenceMatrix

IncidenceMatrix::IncidenceMatrix(Alphabet rows, Alphabet cols)
    : rows_(std::move(rows)), cols_(std::move(cols)),
      entries_(rows_.size() * cols_.size()) {}

SupportMatrix IncidenceMatrix::support() const {
  if (rows_.size() != cols_.size())
    throw DomainError("support of a non-square incidence matrix");
  SupportMatrix s(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (at(i, j) != 0)
        s.set(i, j);
  return s;
}

IncidenceMatrix operator*(const IncidenceMatrix& x, const IncidenceMatrix& y) {
  if (!(x.cols_ == y.rows_))
    throw DomainError("incidence product: inner alphabets differ");
  IncidenceMatrix z(x.rows_, y.cols_);
  for (std::size_t i = 0; i < x.rows_.size(); ++i)
    for (std::size_t t = 0; t < x.cols_.size(); ++t)
      if (x.at(i, t) != 0)
        for (std::size_t j = 0; j < y.cols_.size(); ++j)
          z.at(i, j) += x.at(i, t) * y.at(t, j);
  return z;
}

IncidenceMatrix incidence(const Morphism& m) {
  IncidenceMatrix out(m.codomain(), m.domain());
  for (std::size_t j = 0; j < m.domain().size(); ++j)
    for (Letter l : m.image_at(j))
      out.at(m.codomain().index_of(l), j) += 1;
  return out;
}

IncidenceMatrix power(const IncidenceMatrix& m, std::uint64_t k) {
  if (!(m.rows() == m.cols()))
    throw DomainError("power of a non-square incidence matrix");
  IncidenceMatrix acc(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows().size(); ++i)
    acc.at(i, i) = 1;
  IncidenceMatrix base = m;
  while (k > 0) {
    if (k & 1)
      acc = acc * base;
    k >>= 1;
    if (k > 0)
      base = base * base;
  }
  return acc;
}

SupportMatrix support_of(const Morphism& sigma) {
  if (!sigma.is_endomorphism())
    throw DomainError("support_of: not an endomorphism");
  SupportMatrix s(sigma.domain().size());
  for (std::size_t j = 0; j < sigma.domain().size(); ++j)
    for (Letter l : sigma.image_at(j))
      s.set(sigma.domain().index_of(l), j);
  return s;
}

// ------------------------------------------------------------ decomposition

const char* to_string(ComponentClass c) {
  switch (c) {
  case ComponentClass::Null:
    return "null";
  case ComponentClass::Unit:
    return "unit";
  case ComponentClass::Primitive:
    return "primitive";
  }
  return "?";
}

std::vector<Letter> PrimitiveComponentDecomposition::letter_order() const {
  std::vector<Letter> out;
  for (auto& c : components)
    out.insert(out.end(), c.letters.begin(), c.letters.end());
  return out;
}

std::size_t PrimitiveComponentDecomposition::component_of(Letter l) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (std::find(components[i].letters.begin(), components[i].letters.end(), l) !=
        components[i].letters.end())
      return i;
  throw DomainError("letter '" + l.name() + "' is in no component");
}

std::uint64_t cyclicity_lcm(const SupportMatrix& m) {
  auto g = graph_of(m);
  auto comps = strongly_connected_components(g);
  auto ids = component_ids(comps, m.size());
  std::uint64_t p = 1;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto h = cyclicity_index(g, comps[c], ids, c);
    if (h > 0)
      p = std::lcm(p, h);
  }
  return p;
}

PrimitiveComponentDecomposition component_decomposition(const Morphism& sigma) {
  const auto& alpha = sigma.domain();
  const std::size_t n = alpha.size();
  PrimitiveComponentDecomposition out;
  if (n == 0)
    return out;

  const IncidenceMatrix m = incidence(sigma);
  const SupportMatrix s = m.support();
  const auto base_graph = graph_of(s);
  const auto base_sccs = strongly_connected_components(base_graph);
  const auto base_ids = component_ids(base_sccs, n);
  out.power = cyclicity_lcm(s);

  const SupportMatrix sp = power(s, out.power);
  const auto g = graph_of(sp);
  auto sccs = strongly_connected_components(g); // sinks first
  std::reverse(sccs.begin(), sccs.end());       // sources first
  const auto ids = component_ids(sccs, n);

  std::vector<Component> non_principal, principal;
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    const auto& comp = sccs[c];
    Component out_comp;
    for (auto v : comp)
      out_comp.letters.push_back(alpha[v]);
    if (comp.size() == 1 && !sp.at(comp[0], comp[0])) {
      out_comp.kind = ComponentClass::Null;
    } else if (comp.size() == 1) {
      auto count = diagonal_count(m, base_sccs[base_ids[comp[0]]], comp[0], out.power);
      out_comp.kind = count == 1 ? ComponentClass::Unit : ComponentClass::Primitive;
    } else {
      out_comp.kind = ComponentClass::Primitive;
    }
    if (out_comp.kind == ComponentClass::Primitive)
      HD0L_ASSERT(is_primitive(sp.submatrix(comp)),
                  "primitive-classified block fails the primitivity test");
    bool closed = true;
    for (auto v : comp)
      for (auto w : g[v])
        if (ids[w] != c)
          closed = false;
    out_comp.principal = closed;
    (closed ? principal : non_principal).push_back(std::move(out_comp));
  }
  out.non_principal = non_principal.size();
  out.components = std::move(non_principal);
  out.components.insert(out.components.end(), principal.begin(), principal.end());
  return out;
}

// ----------------------------------------------------------- classification

bool LetterClassification::all_growing() const {
  return std::all_of(info_.begin(), info_.end(),
                     [](const LetterInfo& i) { return i.growing; });
}

std::vector<Letter> LetterClassification::growing_letters() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < info_.size(); ++i)
    if (info_[i].growing)
      out.push_back(alphabet_[i]);
  return out;
}

std::vector<Letter> LetterClassification::non_growing_letters() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < info_.size(); ++i)
    if (!info_[i].growing)
      out.push_back(alphabet_[i]);
  return out;
}

std::vector<Letter> LetterClassification::erasing_letters() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < info_.size(); ++i)
    if (info_[i].erasing)
      out.push_back(alphabet_[i]);
  return out;
}

LetterClassification classify_letters(const Morphism& sigma) {
  const auto& alpha = sigma.domain();
  const std::size_t n = alpha.size();
  std::vector<LetterInfo> info(n);
  if (n == 0)
    return {alpha, info};

  const SupportMatrix s = support_of(sigma);
  for (std::size_t b = 0; b < n; ++b)
    info[b].erasing = sigma.image_at(b).empty();
  // least fixed point: mortal iff every letter of the image is mortal
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < n; ++b) {
      if (info[b].mortal)
        continue;
      auto col = s.column(b);
      if (std::all_of(col.begin(), col.end(), [&](auto c) { return info[c].mortal; })) {
        info[b].mortal = true;
        changed = true;
      }
    }
  }

  // Work with tau = sigma^e in block form with stable letter sets.
  const std::uint64_t e = stable_exponent(sigma, ExponentPolicy::Minimal);
  const SupportMatrix t = power(s, e);
  const IncidenceMatrix m = incidence(sigma);
  const auto base_sccs = strongly_connected_components(graph_of(s));
  const auto base_ids = component_ids(base_sccs, n);
  const auto g = graph_of(t);
  const auto sccs = strongly_connected_components(g); // sinks first

  std::vector<bool> tau_erasing(n);
  for (std::size_t b = 0; b < n; ++b)
    tau_erasing[b] = t.column_empty(b);

  std::vector<bool> resolved_non_growing(n, false);
  for (const auto& comp : sccs) {
    if (comp.size() > 1) {
      for (auto b : comp)
        info[b].growing = true;
      continue;
    }
    const auto b = comp[0];
    const auto col = t.column(b);
    if (!t.at(b, b)) { // null block: children already resolved
      bool bounded = std::all_of(col.begin(), col.end(), [&](auto c) {
        return tau_erasing[c] || resolved_non_growing[c];
      });
      info[b].growing = !bounded;
    } else if (diagonal_count(m, base_sccs[base_ids[b]], b, e) == 1) { // unit
      bool bounded = std::all_of(col.begin(), col.end(),
                                 [&](auto c) { return c == b || tau_erasing[c]; });
      info[b].growing = !bounded;
    } else {
      info[b].growing = true;
    }
    resolved_non_growing[b] = !info[b].growing;
  }
  return {alpha, info};
}

std::size_t letters_stabilization_exponent(const Morphism& sigma) {
  const SupportMatrix s = support_of(sigma);
  if (cyclicity_lcm(s) != 1)
    throw PreconditionError(
        "letters_stabilization_exponent: incidence matrix is not in block form");
  const std::size_t e = sigma.domain().size();
  const SupportMatrix se = power(s, e);
  if (!(se == se * se))
    throw PreconditionError(
        "letters_stabilization_exponent: letter sets do not stabilize at |A|");
  return e;
}

bool has_block_form(const SupportMatrix& s) {
  for (const auto& comp : strongly_connected_components(graph_of(s))) {
    if (comp.size() == 1 && !s.at(comp[0], comp[0]))
      continue;
    if (!block_all_true(s, comp))
      return false;
  }
  return true;
}

bool has_block_form(const Morphism& sigma) { return has_block_form(support_of(sigma)); }

bool has_stable_letter_sets(const SupportMatrix& s) { return s == s * s; }

bool has_stable_letter_sets(const Morphism& sigma) {
  return has_stable_letter_sets(support_of(sigma));
}

std::uint64_t stable_exponent(const Morphism& sigma, ExponentPolicy policy) {
  const SupportMatrix s = support_of(sigma);
  const std::uint64_t n = s.size();
  if (n == 0)
    return 1;
  const std::uint64_t p = cyclicity_lcm(s);
  const std::uint64_t step = policy == ExponentPolicy::AlphabetMultiple ? p * n : p;
  const SupportMatrix base = power(s, step);
  SupportMatrix cur = base;
  // p·n·(n^2-2n+2) always verifies: every block is positive by then.
  const std::uint64_t cap = (n * n - 2 * n + 2) * (policy == ExponentPolicy::Minimal ? n : 1);
  for (std::uint64_t t = 1; t <= cap; ++t) {
    if (has_block_form(cur) && has_stable_letter_sets(cur))
      return step * t;
    cur = cur * base;
  }
  throw InternalError("stable_exponent: no verified exponent within the bound");
}

} // namespace hd0l
