#include "engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <json.hpp>

#include "gallery.hpp"

namespace pwa {

using nlohmann::json;

namespace {

constexpr long long kEnumCap = 10'000'000;

// Instances of one shape: S^(cells). Saturates at kEnumCap+1.
long long shape_count(int S, long long cells) {
  long long n = 1;
  for (long long i = 0; i < cells; ++i) {
    n *= S;
    if (n > kEnumCap) return kEnumCap + 1;
  }
  return n;
}

long long grid_count(int S, int maxA, int maxB) {
  long long total = 0;
  for (int a = 1; a <= maxA; ++a)
    for (int b = 1; b <= maxB; ++b) {
      total += shape_count(S, (long long)a * b);
      if (total > kEnumCap) return kEnumCap + 1;
    }
  return total;
}

std::vector<std::string> grid_at(const std::vector<std::string>& alphabet, int maxA,
                                 int maxB, long long index, int& outA, int& outB) {
  int S = (int)alphabet.size();
  for (int a = 1; a <= maxA; ++a)
    for (int b = 1; b <= maxB; ++b) {
      long long n = shape_count(S, (long long)a * b);
      if (index >= n) { index -= n; continue; }
      std::vector<std::string> cells(a * b);
      for (int i = 0; i < a * b; ++i) { cells[i] = alphabet[index % S]; index /= S; }
      outA = a;
      outB = b;
      return cells;
    }
  throw Error(ErrCode::BadArgument, "instance index out of range");
}

}  // namespace

long long torus_count(int alphabetSize, int maxP, int maxQ) {
  return grid_count(alphabetSize, maxP, maxQ);
}

Torus torus_at_index(const std::vector<std::string>& alphabet, int maxP, int maxQ,
                     long long index) {
  Torus t;
  t.grid = grid_at(alphabet, maxP, maxQ, index, t.p, t.q);
  return t;
}

long long pattern_count(int alphabetSize, int maxW, int maxH) {
  return grid_count(alphabetSize, maxW, maxH);
}

FinitePattern pattern_at_index(const std::vector<std::string>& alphabet, int maxW,
                               int maxH, long long index) {
  int w, h;
  auto cells = grid_at(alphabet, maxW, maxH, index, w, h);
  FinitePattern p;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) p.cells[{x, y}] = cells[y * w + x];
  return p;
}

Decider automaton_decider(const Automaton& a, const std::string& name) {
  Decider d;
  d.alphabet = a.alphabet;
  d.name = name;
  d.torus = [a](const Torus& t) { return accepts_torus(a, t); };
  d.pattern = [a](const FinitePattern& p) { return accepts_pattern(a, p); };
  return d;
}

Decider oracle_decider(const std::string& name) {
  Decider d;
  d.name = "oracle:" + name;
  if (name == "even_runs") {
    d.alphabet = {"0", "1"};
    d.torus = [](const Torus& t) { return in_even_runs(t); };
  } else if (name == "ssu") {
    d.alphabet = {"0", "1"};
    d.torus = [](const Torus& t) { return in_ssu(t); };
    d.pattern = [](const FinitePattern& p) { return in_ssu(p); };
  } else if (name == "cone_labyrinth") {
    d.alphabet = {"0", "1", "#"};
    d.torus = [](const Torus& t) { return in_cone_labyrinth(t).inSubshift; };
    d.pattern = [](const FinitePattern& p) { return in_cone_labyrinth(p).inSubshift; };
  } else {
    throw Error(ErrCode::BadArgument, "unknown oracle \"" + name + "\"");
  }
  return d;
}

namespace {

json torus_instance(const Torus& t) {
  return {{"kind", "torus"}, {"p", t.p}, {"q", t.q}, {"cells", t.grid}};
}

json pattern_instance(const FinitePattern& p) {
  json cells = json::array();
  for (auto& [c, s] : p.cells) cells.push_back({{"x", c.x}, {"y", c.y}, {"symbol", s}});
  return {{"kind", "pattern"}, {"cells", cells}};
}

// Evaluates f over [0, n) with a worker pool; results land in index order so
// parallel output is byte-identical to a sequential run.
void parallel_for(long long n, int threads, const std::function<void(long long)>& f) {
  if (threads <= 0) threads = (int)std::thread::hardware_concurrency();
  if (threads <= 1 || n < 64) {
    for (long long i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<long long> cursor{0};
  std::atomic<bool> failed{false};
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&]() {
      constexpr long long kChunk = 256;
      while (!failed) {
        long long lo = cursor.fetch_add(kChunk);
        if (lo >= n) break;
        long long hi = std::min(n, lo + kChunk);
        try {
          for (long long i = lo; i < hi; ++i) f(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

CompareResult compare_deciders(const Decider& a, const Decider& b,
                               const CompareOptions& opt) {
  if (a.alphabet != b.alphabet)
    throw Error(ErrCode::AlphabetMismatch,
                "cannot compare deciders over different alphabets");
  if (opt.patterns && (!a.pattern || !b.pattern))
    throw Error(ErrCode::BadArgument,
                a.pattern ? b.name + " has no pattern decider"
                          : a.name + " has no pattern decider");
  int S = (int)a.alphabet.size();
  long long n;
  std::function<json(long long)> instanceAt;
  std::function<std::pair<bool, bool>(long long)> verdictAt;
  std::function<std::string(long long)> renderAt;

  std::vector<Torus> sampleTori;
  std::vector<FinitePattern> samplePatterns;
  if (opt.samples >= 0) {
    // Instances are drawn sequentially up front so the worker count cannot
    // change the sampled set.
    SplitMix64 rng(opt.seed);
    n = opt.samples;
    for (long long i = 0; i < n; ++i) {
      Torus t = random_torus(rng, a.alphabet, opt.maxP, opt.maxQ);
      if (opt.patterns) {
        FinitePattern p;
        for (int y = 0; y < t.q; ++y)
          for (int x = 0; x < t.p; ++x) p.cells[{x, y}] = t.at(x, y);
        samplePatterns.push_back(std::move(p));
      } else {
        sampleTori.push_back(std::move(t));
      }
    }
  } else {
    n = grid_count(S, opt.maxP, opt.maxQ);
    if (n > kEnumCap)
      throw Error(ErrCode::BoundTooLarge,
                  "exhaustive comparison would exceed " + std::to_string(kEnumCap) +
                      " instances");
  }

  if (opt.patterns) {
    auto at = [&, S](long long i) {
      return opt.samples >= 0 ? samplePatterns[i]
                              : pattern_at_index(a.alphabet, opt.maxP, opt.maxQ, i);
    };
    instanceAt = [at](long long i) { return pattern_instance(at(i)); };
    verdictAt = [&, at](long long i) {
      FinitePattern p = at(i);
      return std::make_pair(a.pattern(p), b.pattern(p));
    };
    renderAt = [at](long long i) { return pattern_render(at(i)); };
  } else {
    auto at = [&, S](long long i) {
      return opt.samples >= 0 ? sampleTori[i]
                              : torus_at_index(a.alphabet, opt.maxP, opt.maxQ, i);
    };
    instanceAt = [at](long long i) { return torus_instance(at(i)); };
    verdictAt = [&, at](long long i) {
      Torus t = at(i);
      return std::make_pair(a.torus(t), b.torus(t));
    };
    renderAt = [at](long long i) { return torus_render(at(i)); };
  }

  std::vector<uint8_t> va(n), vb(n);
  parallel_for(n, opt.threads, [&](long long i) {
    auto [ra, rb] = verdictAt(i);
    va[i] = ra;
    vb[i] = rb;
  });

  CompareResult r;
  r.checked = n;
  for (long long i = 0; i < n; ++i) {
    if (va[i] != vb[i]) {
      r.first = Disagreement{i, renderAt(i), (bool)va[i], (bool)vb[i]};
      break;
    }
  }
  if (opt.emitRecords) {
    for (long long i = 0; i < n; ++i) {
      json rec = {{"instance", instanceAt(i)},
                  {"verdict",
                   {{"a", (bool)va[i]}, {"b", (bool)vb[i]}, {"agree", va[i] == vb[i]}}},
                  {"millis", 0}};
      r.records.push_back(rec.dump());
    }
  }
  return r;
}

std::string witness_json(const Automaton& a, const Arena& ar, const WinningSet& w,
                         bool accepted) {
  json out;
  if (accepted) {
    json strat = json::array();
    for (int nd = 0; nd < ar.nodeCount; ++nd) {
      if (!w.in[nd] || ar.owner[nd] != 0 || w.chosenMove[nd] < 0) continue;
      strat.push_back({{"cell", {ar.cellOf[nd].x, ar.cellOf[nd].y}},
                       {"state", a.states[ar.stateOf[nd]].id},
                       {"edge", ar.moves[nd][w.chosenMove[nd]].edge}});
    }
    out["strategy"] = strat;
  } else {
    std::vector<int> order;
    for (int nd = 0; nd < ar.nodeCount; ++nd)
      if (!w.in[nd]) order.push_back(nd);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return w.removalRank[x] < w.removalRank[y]; });
    json att = json::array();
    for (int nd : order)
      att.push_back({{"cell", {ar.cellOf[nd].x, ar.cellOf[nd].y}},
                     {"state", a.states[ar.stateOf[nd]].id},
                     {"rank", w.removalRank[nd]}});
    out["attractor"] = att;
  }
  return out.dump();
}

std::vector<std::string> enum_records(const Automaton& a, const CompareOptions& opt,
                                      bool witness) {
  if (opt.patterns)
    throw Error(ErrCode::BadArgument, "enum runs over tori");
  long long n = grid_count((int)a.alphabet.size(), opt.maxP, opt.maxQ);
  if (n > kEnumCap)
    throw Error(ErrCode::BoundTooLarge, "enumeration would exceed " +
                                            std::to_string(kEnumCap) + " instances");
  std::vector<std::string> lines(n);
  parallel_for(n, opt.threads, [&](long long i) {
    Torus t = torus_at_index(a.alphabet, opt.maxP, opt.maxQ, i);
    Arena ar = build_arena(a, t);
    WinningSet w = solve(ar);
    bool ok = true;
    for (int y = 0; y < t.q && ok; ++y)
      for (int x = 0; x < t.p && ok; ++x) {
        int init = a.initial[a.symbolIndex(t.at(x, y))];
        int nd = init < 0 ? -1 : ar.node({x, y}, init);
        if (nd < 0 || !w.in[nd]) ok = false;
      }
    json rec = {{"instance", torus_instance(t)}, {"verdict", ok}, {"millis", 0}};
    if (witness) rec["witness"] = json::parse(witness_json(a, ar, w, ok));
    lines[i] = rec.dump();
  });
  return lines;
}

Automaton random_automaton(SplitMix64& rng, int maxStates,
                           const std::vector<std::string>& alphabet) {
  int S = (int)alphabet.size();
  int n = std::max(S, 1 + (int)rng.below(std::max(maxStates, S)));
  static const Direction dirs[5] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  Automaton a;
  a.alphabet = alphabet;
  for (int i = 0; i < n; ++i) {
    std::string sym = i < S ? alphabet[i] : alphabet[rng.below(S)];
    a.states.push_back({"s" + std::to_string(i), sym, Quant::Exists});
  }
  int edges = (int)rng.below(2 * n + 1);
  for (int e = 0; e < edges; ++e) {
    int from = (int)rng.below(n), to = (int)rng.below(n);
    a.edges.push_back(
        {a.states[from].id, a.states[to].id, -1, -1, dirs[rng.below(5)]});
  }
  for (int s = 0; s < S; ++s) {
    std::vector<int> fits;
    for (int i = 0; i < n; ++i)
      if (a.states[i].symbol == alphabet[s]) fits.push_back(i);
    a.initialRaw.push_back({alphabet[s], a.states[fits[rng.below(fits.size())]].id});
  }
  a.resolve();
  // Quantifiers last: Unspecified only where the state is syntactically
  // deterministic, so the result always validates.
  for (int i = 0; i < n; ++i) {
    int pick = (int)rng.below(3);
    a.states[i].quant = pick == 0 ? Quant::Exists : Quant::Forall;
    if (pick == 2) {
      a.states[i].quant = Quant::Unspecified;
      try {
        effective_quantifier(a, i);
      } catch (const Error&) {
        a.states[i].quant = Quant::Exists;
      }
    }
  }
  return a;
}

Torus random_torus(SplitMix64& rng, const std::vector<std::string>& alphabet,
                   int maxP, int maxQ) {
  Torus t;
  t.p = 1 + (int)rng.below(maxP);
  t.q = 1 + (int)rng.below(maxQ);
  t.grid.resize(t.p * t.q);
  for (auto& c : t.grid) c = alphabet[rng.below(alphabet.size())];
  return t;
}

Torus random_valid_labyrinth(SplitMix64& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    int walls = 1 + (int)rng.below(2);
    std::vector<int> widths;
    int p = walls;
    for (int i = 0; i < walls; ++i) {
      int w = 2 + (int)rng.below(3);
      widths.push_back(w);
      p += w;
    }
    int q = 3 + (int)rng.below(4);
    Torus t;
    t.p = p;
    t.q = q;
    t.grid.assign(p * q, "0");
    int x = 0;
    for (int run = 0; run < walls; ++run) {
      for (int y = 0; y < q; ++y) t.at(x, y) = "#";
      int w = widths[run];
      if (rng.below(4) < 3) {
        // Entrance at the run's first column, exit at its last, vertical
        // offset within the reachable cone (diagonal steps drift one row per
        // column).
        int y0 = (int)rng.below(q);
        int dm = std::min(w - 1, q - 1);
        int d = (int)rng.below(2 * dm + 1) - dm;
        if (w == 2 && d == 0) d = 1;  // adjacent 1s would form the domino 11
        t.at(x + 1, y0) = "1";
        t.at(x + w, y0 + d) = "1";
      }
      x += 1 + w;
    }
    if (in_cone_labyrinth(t).inSubshift) return t;
  }
  throw Error(ErrCode::BadArgument, "labyrinth generation failed to converge");
}

}  // namespace pwa
