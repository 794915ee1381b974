#include "reference_model.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace oracle {

namespace {

enum class K { ST, LD, REL, ACQ, FENCE };

struct Ins {
  std::string id;
  K k;
  std::string master;
  int pos;
  std::string addr, reg;
  std::int64_t val = 0;
};

bool IsSt(K k) { return k == K::ST || k == K::REL; }
bool IsLd(K k) { return k == K::LD || k == K::ACQ; }

struct State {
  std::set<std::string> issued, observed, fences;
  std::map<std::string, std::set<std::string>> observers, after;
  std::map<std::string, std::map<std::string, std::int64_t>> lov, rf;
  std::map<std::string, int> cursor;
  std::vector<std::string> order;

  std::string Key() const {
    std::ostringstream os;
    auto set = [&](const std::set<std::string>& s) {
      os << "{";
      for (const auto& x : s) os << x << ",";
      os << "}";
    };
    set(issued);
    set(observed);
    set(fences);
    for (const auto& [k, v] : observers) {
      os << k << ":";
      set(v);
    }
    os << "|";
    for (const auto& [k, v] : after) {
      os << k << ":";
      set(v);
    }
    for (const auto* m : {&lov, &rf}) {
      os << "|";
      for (const auto& [a, row] : *m) {
        for (const auto& [b, v] : row) os << a << "." << b << "=" << v << ";";
      }
    }
    for (const auto& [m, c] : cursor) os << m << "@" << c << ";";
    for (const auto& x : order) os << x << ">";
    return os.str();
  }
};

class Model {
 public:
  explicit Model(const hsamm::SystemConfig& c) {
    for (const auto& i : c.instructions) {
      Ins x;
      x.id = i.id;
      x.master = c.masters[i.issuer];
      x.pos = static_cast<int>(i.index);
      switch (i.kind) {
        case hsamm::InstrKind::kStore: x.k = K::ST; break;
        case hsamm::InstrKind::kLoad: x.k = K::LD; break;
        case hsamm::InstrKind::kScRelStore: x.k = K::REL; break;
        case hsamm::InstrKind::kScAcqLoad: x.k = K::ACQ; break;
        case hsamm::InstrKind::kFence: x.k = K::FENCE; break;
      }
      if (i.address) x.addr = c.addresses[*i.address];
      if (i.reg) x.reg = c.registers[*i.reg];
      if (i.value) x.val = *i.value;
      ins_[x.id] = x;
      prog_[x.master].push_back(x.id);
    }
    masters_ = c.masters;
    for (const auto& m : masters_) {
      init_.cursor[m] = 1;
      for (std::size_t a = 0; a < c.addresses.size(); ++a) {
        init_.lov[m][c.addresses[a]] = c.initial_memory[a];
      }
      for (const auto& r : c.registers) init_.rf[m][r] = 0;
    }
  }

  Result Run() {
    Visit(init_);
    result_.distinct_states = seen_.size();
    return result_;
  }

 private:
  // Store: m observed it. Load: its issuer observed it.
  bool Performed(const State& s, const std::string& a, const std::string& m) {
    if (IsSt(ins_[a].k)) {
      auto it = s.observers.find(a);
      return it != s.observers.end() && it->second.count(m);
    }
    return s.observed.count(a) > 0;
  }

  // Program-order constraints on m observing x.
  bool OrderOk(const State& s, const Ins& x, const std::string& m) {
    for (const auto& id : prog_[x.master]) {
      const Ins& y = ins_[id];
      if (y.pos >= x.pos) break;
      if (y.k == K::ACQ && !s.observed.count(y.id)) return false;
      if (y.k == K::FENCE && s.fences.count(y.id)) {
        for (const auto& id2 : prog_[x.master]) {
          const Ins& a = ins_[id2];
          if (a.pos >= y.pos) break;
          if (a.k != K::FENCE && s.issued.count(a.id) && !Performed(s, a.id, m)) {
            return false;
          }
        }
      }
      if (x.k == K::REL && y.k != K::FENCE && !Performed(s, y.id, m)) {
        return false;
      }
    }
    return true;
  }

  bool HasFence(const State& s, const std::string& m) {
    for (const auto& f : s.fences) {
      if (ins_[f].master == m) return true;
    }
    return false;
  }

  void Visit(const State& s) {
    if (!seen_.insert(s.Key()).second) return;
    bool all_loads = true;
    for (const auto& [id, x] : ins_) {
      if (IsLd(x.k) && !s.observed.count(id)) all_loads = false;
    }
    if (all_loads) result_.trigger_maps.insert(s.rf);

    std::vector<State> next;
    for (const auto& m : masters_) {
      int c = s.cursor.at(m);
      if (c <= static_cast<int>(prog_[m].size())) {
        const Ins& x = ins_[prog_[m][c - 1]];
        State t = s;
        t.cursor[m] = c + 1;
        if (x.k == K::FENCE) {
          t.fences.insert(x.id);
        } else {
          t.issued.insert(x.id);
          t.observers[x.id];
        }
        next.push_back(std::move(t));
      }
    }
    for (const auto& id : s.issued) {
      const Ins& x = ins_[id];
      if (IsSt(x.k)) {
        for (const auto& m : masters_) {
          if (s.observers.at(id).count(m) || !OrderOk(s, x, m)) continue;
          if (x.k == K::REL) {
            bool listed = false, ok = true;
            for (const auto& o : s.order) {
              if (o == id) {
                listed = true;
                break;
              }
              if (IsSt(ins_[o].k) && !s.observers.at(o).count(m)) ok = false;
            }
            (void)listed;
            if (!ok) continue;
          }
          State t = s;
          t.observed.insert(id);
          t.observers[id].insert(m);
          t.lov[m][x.addr] = x.val;
          if (x.k == K::REL &&
              std::find(t.order.begin(), t.order.end(), id) == t.order.end()) {
            t.order.push_back(id);
          }
          next.push_back(std::move(t));
        }
        continue;
      }
      // Loads: only the issuer observes them.
      const std::string& m = x.master;
      if (s.observed.count(id) || !OrderOk(s, x, m)) continue;
      State base = s;
      base.observed.insert(id);
      base.observers[id].insert(m);
      base.rf[m][x.reg] = s.lov.at(m).at(x.addr);
      if (x.k == K::ACQ) {
        base.order.push_back(id);
        next.push_back(std::move(base));
        continue;
      }
      bool any_store = false, before_ok = false;
      const bool fenced = HasFence(s, m);
      for (const auto& [sid, st] : ins_) {
        if (!IsSt(st.k) || st.addr != x.addr) continue;
        any_store = true;
        bool seen_by_m = s.issued.count(sid) && s.observers.at(sid).count(m);
        if (!seen_by_m) {
          auto it = s.after.find(sid);
          bool empty_after = it == s.after.end() || it->second.empty();
          if (!fenced || empty_after) before_ok = true;
        } else {
          State t = base;
          t.after[sid].insert(id);
          next.push_back(std::move(t));
        }
      }
      if (before_ok || !any_store) next.push_back(base);
    }
    if (next.empty()) result_.final_maps.insert(s.rf);
    for (const auto& t : next) Visit(t);
  }

  std::map<std::string, Ins> ins_;
  std::map<std::string, std::vector<std::string>> prog_;
  std::vector<std::string> masters_;
  State init_;
  std::set<std::string> seen_;
  Result result_;
};

}  // namespace

Result Enumerate(const hsamm::SystemConfig& config) {
  return Model(config).Run();
}

}  // namespace oracle
