#include "agentarch/interface.hpp"

#include <sstream>

#include "agentarch/archcat.hpp"
#include "agentarch/errors.hpp"

namespace agentarch {

bool RelationalInterface::pair_supported(const TypeSymbol& s, const TypeSymbol& k) const {
  for (const auto& [ss, kk] : support)
    if (ss == s && kk == k) return true;
  return false;
}

bool support_lookup(const Architecture& arch, const TypeProfile& xs, const TypeSymbol& k) {
  if (!arch.know.has_type(k))
    throw undeclared_symbol("support_lookup: knowledge type '" + k.name + "' not declared in " + arch.name);
  for (const TypeSymbol& x : xs)
    if (!arch.syn.has_type(x))
      throw undeclared_symbol("support_lookup: syntax type '" + x.name + "' not declared in " + arch.name);
  for (const TypeSymbol& x : xs)
    if (arch.iface.pair_supported(x, k)) return true;
  return false;
}

GeneratorPartition knowledge_compatible_generators(const Architecture& arch) {
  GeneratorPartition part;
  auto touches_support = [&](const TypeProfile& xs) {
    for (const TypeSymbol& x : xs)
      for (const auto& [s, k] : arch.iface.support)
        if (s == x) return true;
    return false;
  };
  for (const GeneratorSymbol& g : arch.syn.generators) {
    if (touches_support(g.dom) && touches_support(g.cod))
      part.compatible.push_back(g.name);
    else
      part.agnostic.push_back(g.name);
  }
  return part;
}

std::string render_support_table(const Architecture& arch) {
  const auto& cols = arch.syn.types;
  const auto& rows = arch.know.types;
  size_t head = std::string("support ").size() + arch.name.size();
  size_t name_w = head;
  for (const TypeSymbol& r : rows) name_w = std::max(name_w, r.name.size());

  std::ostringstream os;
  os << "support " << arch.name << std::string(name_w - head, ' ');
  for (const TypeSymbol& c : cols) os << "  " << c.name;
  os << "\n";
  for (const TypeSymbol& r : rows) {
    os << r.name << std::string(name_w - r.name.size(), ' ');
    for (const TypeSymbol& c : cols) {
      std::string cell(c.name.size(), ' ');
      cell[0] = arch.iface.pair_supported(c, r) ? '+' : '-';
      os << "  " << cell;
    }
    os << "\n";
  }
  return os.str();
}

ModularityReport modularity_report(const Architecture& arch) {
  ModularityReport rep;
  for (const TypeSymbol& k : arch.know.types) {
    bool carried = false;
    for (const auto& [s, kk] : arch.iface.support)
      if (kk == k) carried = true;
    if (carried) rep.knowledge_carrier_types++;
  }
  rep.supported_pairs = static_cast<int>(arch.iface.support.size());
  rep.support_table = render_support_table(arch);
  return rep;
}

}  // namespace agentarch
