#include "cryptosram/circuit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cryptosram/error.hpp"

namespace csram {

Netlist Netlist::parse(std::string_view text) {
  Netlist n;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find("//"); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto bad = [&] { return Error(ErrorCode::kParseError, "netlist line " + std::to_string(line_no)); };
    if (tok.size() < 3 || tok[1] != "=") throw bad();
    Gate g;
    g.dst = tok[0];
    if (tok.size() == 3 && tok[2].size() > 1 && tok[2][0] == '~') {
      g.op = GateOp::kNot;
      g.a = tok[2].substr(1);
    } else if (tok.size() == 5) {
      g.a = tok[2];
      g.b = tok[4];
      if (tok[3] == "^") g.op = GateOp::kXor;
      else if (tok[3] == "#") g.op = GateOp::kXnor;
      else if (tok[3] == "&") g.op = GateOp::kAnd;
      else if (tok[3] == "|") g.op = GateOp::kOr;
      else throw bad();
    } else {
      throw bad();
    }
    n.gates.push_back(std::move(g));
  }
  return n;
}

std::map<std::string, int> Netlist::evaluate(const std::map<std::string, int>& inputs) const {
  auto v = inputs;
  const auto get = [&](const std::string& s) {
    const auto it = v.find(s);
    if (it == v.end()) throw Error(ErrorCode::kInvalidArgument, "undefined signal '" + s + "'");
    return it->second;
  };
  for (const auto& g : gates) {
    int r = 0;
    switch (g.op) {
      case GateOp::kXor: r = get(g.a) ^ get(g.b); break;
      case GateOp::kXnor: r = 1 ^ get(g.a) ^ get(g.b); break;
      case GateOp::kAnd: r = get(g.a) & get(g.b); break;
      case GateOp::kOr: r = get(g.a) | get(g.b); break;
      case GateOp::kNot: r = 1 ^ get(g.a); break;
    }
    v[g.dst] = r;
  }
  return v;
}

namespace {

std::vector<const std::string*> operands(const Gate& g) {
  if (g.op == GateOp::kNot) return {&g.a};
  if (g.a == g.b) return {&g.a};
  return {&g.a, &g.b};
}

}  // namespace

CircuitReport compile_circuit(const Netlist& netlist, const CircuitPlacement& placement, CommandBuilder& out) {
  const auto& gates = netlist.gates;
  const std::size_t start = out.size();

  std::map<std::string, std::size_t> producer;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (producer.count(gates[i].dst) || placement.inputs.count(gates[i].dst))
      throw Error(ErrorCode::kInvalidArgument, "signal '" + gates[i].dst + "' assigned twice");
    producer[gates[i].dst] = i;
  }

  std::map<std::string, int> uses;
  for (const auto& g : gates)
    for (const auto* s : operands(g)) {
      if (!producer.count(*s) && !placement.inputs.count(*s))
        throw Error(ErrorCode::kInvalidArgument, "undefined signal '" + *s + "'");
      ++uses[*s];
    }
  for (const auto& [name, row] : placement.outputs) {
    if (!producer.count(name) && !placement.inputs.count(name))
      throw Error(ErrorCode::kInvalidArgument, "output '" + name + "' is never produced");
    ++uses[name];  // outputs stay live to the end
  }

  std::map<std::string, std::uint8_t> where;  // live signal -> row
  std::map<std::uint8_t, std::string> holder;  // occupied row -> signal
  for (const auto& [name, row] : placement.inputs) {
    where[name] = row;
    holder[row] = name;
  }
  std::set<std::uint8_t> output_rows;
  for (const auto& [name, row] : placement.outputs) output_rows.insert(row);

  std::vector<std::uint8_t> pool = placement.pool;
  std::vector<std::uint8_t> free_pool;
  for (auto r : pool)
    if (!holder.count(r)) free_pool.push_back(r);
  std::vector<std::uint8_t> free_other;  // dead input rows, used after the pool

  CircuitReport rep;
  rep.gates = gates.size();
  rep.peak_live_rows = holder.size();

  const auto release = [&](const std::string& s) {
    if (--uses[s] > 0) return;
    const auto r = where.at(s);
    where.erase(s);
    holder.erase(r);
    if (std::find(pool.begin(), pool.end(), r) != pool.end()) free_pool.push_back(r);
    else free_other.push_back(r);
  };
  const auto take = [&](std::vector<std::uint8_t>& v, std::uint8_t r) { v.erase(std::find(v.begin(), v.end(), r)); };
  const auto allocate = [&](const std::string& s) -> std::uint8_t {
    if (const auto it = placement.outputs.find(s); it != placement.outputs.end()) {
      const auto r = it->second;
      if (!holder.count(r)) {
        if (std::find(free_other.begin(), free_other.end(), r) != free_other.end()) take(free_other, r);
        if (std::find(free_pool.begin(), free_pool.end(), r) != free_pool.end()) take(free_pool, r);
        return r;
      }
    }
    // Prefer rows no pending output still wants.
    for (auto* v : {&free_pool, &free_other})
      for (auto r : *v)
        if (!output_rows.count(r)) {
          take(*v, r);
          return r;
        }
    for (auto* v : {&free_pool, &free_other})
      if (!v->empty()) {
        const auto r = v->front();
        v->erase(v->begin());
        return r;
      }
    throw Error(ErrorCode::kTempBudgetExceeded,
                "circuit needs more than " + std::to_string(pool.size()) + " temporary rows");
  };

  std::vector<bool> done(gates.size(), false);
  std::size_t remaining = gates.size();
  while (remaining > 0) {
    std::size_t best = gates.size();
    int best_score = -1;
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (done[i]) continue;
      bool ready = true;
      int score = 0;
      for (const auto* s : operands(gates[i])) {
        if (!where.count(*s)) {
          ready = false;
          break;
        }
        if (uses[*s] == 1) ++score;
      }
      if (ready && score > best_score) {
        best = i;
        best_score = score;
      }
    }
    if (best == gates.size()) throw Error(ErrorCode::kInvalidArgument, "netlist has a cycle");

    const auto& g = gates[best];
    const auto ra = where.at(g.a);
    const auto rb = g.op == GateOp::kNot ? ra : where.at(g.b);
    for (const auto* s : operands(g)) release(*s);
    const auto rd = allocate(g.dst);
    switch (g.op) {
      case GateOp::kXor: out.xor_(rd, ra, rb); break;
      case GateOp::kAnd: out.and_(rd, ra, rb); break;
      case GateOp::kOr: out.or_(rd, ra, rb); break;
      case GateOp::kNot: out.not_(rd, ra); break;
      case GateOp::kXnor:
        out.xor_(rd, ra, rb);
        out.not_(rd, rd);
        break;
    }
    where[g.dst] = rd;
    holder[rd] = g.dst;
    if (!uses.count(g.dst)) release(g.dst);  // dead on arrival
    rep.peak_live_rows = std::max(rep.peak_live_rows, holder.size());
    done[best] = true;
    --remaining;
  }

  // Outputs that could not land in place. Targets are free now unless another
  // misplaced output sits there; resolve those chains through a spare row.
  std::map<std::uint8_t, std::uint8_t> moves;  // target <- source
  for (const auto& [name, target] : placement.outputs)
    if (where.at(name) != target) moves[target] = where.at(name);
  while (!moves.empty()) {
    bool progressed = false;
    for (auto it = moves.begin(); it != moves.end();) {
      const bool target_busy = std::any_of(moves.begin(), moves.end(),
                                           [&](const auto& m) { return m.second == it->first; });
      if (target_busy) {
        ++it;
        continue;
      }
      out.copy(it->first, it->second);
      ++rep.post_moves;
      it = moves.erase(it);
      progressed = true;
    }
    if (!progressed) {
      // A cycle of misplaced outputs: park one value in a free row.
      auto it = moves.begin();
      const auto spare = allocate("");
      out.copy(spare, it->second);
      ++rep.post_moves;
      it->second = spare;
    }
  }

  rep.commands = out.size() - start;
  return rep;
}

}  // namespace csram
