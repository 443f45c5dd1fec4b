#include "agentarch/archcat.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "agentarch/errors.hpp"

namespace agentarch {

Verdict arch_validate(const Architecture& a) {
  Verdict v = Verdict::passed();
  auto absorb = [&](const Verdict& sub, const std::string& where) {
    if (!sub.ok()) {
      v.status = Verdict::Status::fail;
      for (const std::string& line : sub.evidence) v.note(where + ": " + line);
    }
  };
  absorb(presentation_validate(a.syn), "syntax");
  absorb(presentation_validate(a.know), "knowledge");

  try {
    a.pattern.diagram.check();
  } catch (const Error& e) {
    v.status = Verdict::Status::fail;
    v.note(std::string("pattern: ") + e.what());
  }
  check_diagram_over(v, a.pattern.diagram, a.syn, "pattern");

  for (const auto& [s, k] : a.iface.support) {
    if (!a.syn.has_type(s)) {
      v.status = Verdict::Status::fail;
      v.note("support pair names undeclared syntax type '" + s.name + "'");
    }
    if (!a.know.has_type(k)) {
      v.status = Verdict::Status::fail;
      v.note("support pair names undeclared knowledge type '" + k.name + "'");
    }
  }

  for (const auto& [gname, body] : a.iface.bindings) {
    const GeneratorSymbol* g = a.syn.find_generator(gname);
    if (!g) {
      v.status = Verdict::Status::fail;
      v.note("binding for undeclared syntax generator '" + gname + "'");
      continue;
    }
    check_diagram_over(v, body, a.know, "binding '" + gname + "'");
    // Every boundary type of the binding must be supported against some
    // component of the generator's dom (inputs) / cod (outputs).
    auto side_ok = [&](const TypeProfile& binding_side, const TypeProfile& gen_side) {
      for (const TypeSymbol& k : binding_side) {
        bool backed = false;
        for (const TypeSymbol& s : gen_side)
          if (a.iface.pair_supported(s, k)) backed = true;
        if (!backed) return false;
      }
      return true;
    };
    if (!side_ok(body.boundary_in_types(), g->dom) || !side_ok(body.boundary_out_types(), g->cod)) {
      v.status = Verdict::Status::fail;
      v.note("binding '" + gname + "' boundary types are not supported against the generator profile");
    }
  }

  absorb(constraints_validate(a), "constraints");
  if (v.ok()) v.note("architecture '" + a.name + "' well-formed");
  return v;
}

// ---------------------------------------------------------------------------
// Morphism application: rename wire types, splice generator images.

namespace {

OpenHypergraph apply_layer(const std::map<std::string, std::string>& type_map,
                           const std::map<std::string, OpenHypergraph>& gen_map,
                           const OpenHypergraph& d) {
  OpenHypergraph acc;
  acc.wires.reserve(d.wires.size());
  for (const TypeSymbol& t : d.wires) {
    auto it = type_map.find(t.name);
    if (it == type_map.end()) throw unknown_ref("morphism has no image for type '" + t.name + "'");
    acc.wires.push_back(TypeSymbol{it->second});
  }
  acc.boundary_in = d.boundary_in;
  acc.boundary_out = d.boundary_out;

  std::vector<std::pair<WireId, WireId>> glue;
  for (const DiagramEdge& e : d.edges) {
    auto it = gen_map.find(e.label.name);
    if (it == gen_map.end())
      throw unknown_ref("morphism has no image for generator '" + e.label.name + "'");
    const OpenHypergraph& image = it->second;
    const int offset = static_cast<int>(acc.wires.size());
    acc.wires.insert(acc.wires.end(), image.wires.begin(), image.wires.end());
    for (DiagramEdge ie : image.edges) {
      for (WireId& w : ie.in_ports) w += offset;
      for (WireId& w : ie.out_ports) w += offset;
      acc.edges.push_back(std::move(ie));
    }
    if (image.boundary_in.size() != e.in_ports.size() ||
        image.boundary_out.size() != e.out_ports.size())
      throw boundary_type_mismatch("image of '" + e.label.name + "' has wrong boundary arity");
    for (size_t i = 0; i < e.in_ports.size(); ++i)
      glue.emplace_back(e.in_ports[i], image.boundary_in[i] + offset);
    for (size_t i = 0; i < e.out_ports.size(); ++i)
      glue.emplace_back(e.out_ports[i], image.boundary_out[i] + offset);
  }
  return og_identify_wires(acc, glue);
}

TypeProfile map_profile(const std::map<std::string, std::string>& type_map, const TypeProfile& ts) {
  TypeProfile out;
  for (const TypeSymbol& t : ts) {
    auto it = type_map.find(t.name);
    if (it == type_map.end()) throw unknown_ref("morphism has no image for type '" + t.name + "'");
    out.push_back(TypeSymbol{it->second});
  }
  return out;
}

void validate_layer(Verdict& v, const std::string& layer,
                    const std::vector<TypeSymbol>& src_types,
                    const std::vector<GeneratorSymbol>& src_gens,
                    const std::map<std::string, std::string>& type_map,
                    const std::map<std::string, OpenHypergraph>& gen_map,
                    const HypergraphPresentation& target) {
  for (const TypeSymbol& t : src_types) {
    auto it = type_map.find(t.name);
    if (it == type_map.end()) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": no image for type '" + t.name + "'");
    } else if (!target.has_type(TypeSymbol{it->second})) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": image type '" + it->second + "' not declared in target");
    }
  }
  for (const auto& [name, image] : type_map)
    if (std::find_if(src_types.begin(), src_types.end(),
                     [&, n = name](const TypeSymbol& t) { return t.name == n; }) == src_types.end()) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": type map names unknown source type '" + name + "'");
    }

  for (const GeneratorSymbol& g : src_gens) {
    auto it = gen_map.find(g.name);
    if (it == gen_map.end()) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": no image for generator '" + g.name + "'");
      continue;
    }
    const OpenHypergraph& image = it->second;
    try {
      image.check();
    } catch (const Error& e) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": image of '" + g.name + "' malformed: " + e.what());
      continue;
    }
    check_diagram_over(v, image, target, layer + ": image of '" + g.name + "'");
    try {
      if (image.boundary_in_types() != map_profile(type_map, g.dom) ||
          image.boundary_out_types() != map_profile(type_map, g.cod)) {
        v.status = Verdict::Status::fail;
        v.note(layer + ": image of '" + g.name + "' has boundary profile differing from mapped dom/cod");
      }
    } catch (const Error& e) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": " + e.what());
    }
  }
  for (const auto& [name, image] : gen_map)
    if (std::find_if(src_gens.begin(), src_gens.end(),
                     [&, n = name](const GeneratorSymbol& g) { return g.name == n; }) == src_gens.end()) {
      v.status = Verdict::Status::fail;
      v.note(layer + ": generator map names unknown source generator '" + name + "'");
    }
}

}  // namespace

Verdict morphism_validate(const ArchMorphism& f, const Architecture& a, const Architecture& b) {
  Verdict v = Verdict::passed();
  if (f.source != a.name || f.target != b.name)
    v.note("morphism declares " + f.source + " -> " + f.target + ", checked against " + a.name +
           " -> " + b.name);
  validate_layer(v, "syntax", a.syn.types, a.syn.generators, f.type_map_syn, f.gen_map_syn, b.syn);
  validate_layer(v, "knowledge", a.know.types, a.know.generators, f.type_map_know, f.gen_map_know,
                 b.know);

  // Interface naturality: support of A must land in support of B.
  for (const auto& [s, k] : a.iface.support) {
    auto si = f.type_map_syn.find(s.name);
    auto ki = f.type_map_know.find(k.name);
    if (si == f.type_map_syn.end() || ki == f.type_map_know.end()) continue;  // reported above
    if (!b.iface.pair_supported(TypeSymbol{si->second}, TypeSymbol{ki->second})) {
      v.status = Verdict::Status::fail;
      v.note("naturality: (" + s.name + ", " + k.name + ") maps to unsupported (" + si->second +
             ", " + ki->second + ")");
    }
  }
  if (v.ok()) v.note("morphism '" + f.name + "' valid");
  return v;
}

OpenHypergraph apply_syn(const ArchMorphism& f, const OpenHypergraph& d) {
  return apply_layer(f.type_map_syn, f.gen_map_syn, d);
}

OpenHypergraph apply_know(const ArchMorphism& f, const OpenHypergraph& d) {
  return apply_layer(f.type_map_know, f.gen_map_know, d);
}

ArchMorphism morphism_compose(const ArchMorphism& g, const ArchMorphism& f) {
  if (f.target != g.source)
    throw domain_mismatch("compose: " + f.name + " targets '" + f.target + "' but " + g.name +
                          " sources '" + g.source + "'");
  ArchMorphism out;
  out.name = g.name + "." + f.name;
  out.source = f.source;
  out.target = g.target;
  auto compose_types = [](const std::map<std::string, std::string>& outer,
                          const std::map<std::string, std::string>& inner) {
    std::map<std::string, std::string> r;
    for (const auto& [a, b] : inner) {
      auto it = outer.find(b);
      if (it == outer.end()) throw unknown_ref("compose: no image for intermediate type '" + b + "'");
      r[a] = it->second;
    }
    return r;
  };
  out.type_map_syn = compose_types(g.type_map_syn, f.type_map_syn);
  out.type_map_know = compose_types(g.type_map_know, f.type_map_know);
  for (const auto& [name, image] : f.gen_map_syn) out.gen_map_syn[name] = apply_syn(g, image);
  for (const auto& [name, image] : f.gen_map_know) out.gen_map_know[name] = apply_know(g, image);
  return out;
}

ArchMorphism morphism_identity(const Architecture& a) {
  ArchMorphism f;
  f.name = "id_" + a.name;
  f.source = f.target = a.name;
  for (const TypeSymbol& t : a.syn.types) f.type_map_syn[t.name] = t.name;
  for (const TypeSymbol& t : a.know.types) f.type_map_know[t.name] = t.name;
  for (const GeneratorSymbol& g : a.syn.generators) f.gen_map_syn[g.name] = og_generator(g);
  for (const GeneratorSymbol& g : a.know.generators) f.gen_map_know[g.name] = og_generator(g);
  return f;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> image_labels(const std::map<std::string, OpenHypergraph>& gen_map,
                                      const std::string& gen) {
  std::set<std::string> labels;
  auto it = gen_map.find(gen);
  if (it != gen_map.end())
    for (const DiagramEdge& e : it->second.edges) labels.insert(e.label.name);
  return {labels.begin(), labels.end()};
}

// Rename `name` if it is a symbol of A; generators contribute the labels of
// their image diagram (joined when the image is composite).
std::string map_symbol(const ArchMorphism& f, const Architecture& a, const std::string& name) {
  if (a.syn.has_type(TypeSymbol{name})) {
    auto it = f.type_map_syn.find(name);
    if (it != f.type_map_syn.end()) return it->second;
  }
  if (a.know.has_type(TypeSymbol{name})) {
    auto it = f.type_map_know.find(name);
    if (it != f.type_map_know.end()) return it->second;
  }
  if (a.syn.find_generator(name)) {
    auto labels = image_labels(f.gen_map_syn, name);
    if (!labels.empty()) {
      std::string joined = labels[0];
      for (size_t i = 1; i < labels.size(); ++i) joined += "+" + labels[i];
      return joined;
    }
  }
  if (a.know.find_generator(name)) {
    auto labels = image_labels(f.gen_map_know, name);
    if (!labels.empty()) {
      std::string joined = labels[0];
      for (size_t i = 1; i < labels.size(); ++i) joined += "+" + labels[i];
      return joined;
    }
  }
  return name;
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Token-boundary symbol renaming inside prose params.
std::string map_prose(const ArchMorphism& f, const Architecture& a, const std::string& text) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (ident_char(text[i])) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out += map_symbol(f, a, text.substr(i, j - i));
      i = j;
    } else {
      out += text[i++];
    }
  }
  return out;
}

}  // namespace

Constraint constraint_transport(const ArchMorphism& f, const Architecture& a,
                                const Constraint& rho) {
  Constraint out = rho;
  out.scope.refs.clear();
  std::set<SymbolRef> seen;
  auto push = [&](SymbolRef r) {
    if (seen.insert(r).second) out.scope.refs.push_back(std::move(r));
  };
  for (const ResolvedRef& r : scope_resolve(a, rho.scope)) {
    for (SymbolRef::Space space : r.hits) {
      using Space = SymbolRef::Space;
      switch (space) {
        case Space::SynType: push({Space::SynType, f.type_map_syn.at(r.ref.name), ""}); break;
        case Space::KnowType: push({Space::KnowType, f.type_map_know.at(r.ref.name), ""}); break;
        case Space::SynGen:
          for (const std::string& l : image_labels(f.gen_map_syn, r.ref.name))
            push({Space::SynGen, l, ""});
          break;
        case Space::KnowGen:
          for (const std::string& l : image_labels(f.gen_map_know, r.ref.name))
            push({Space::KnowGen, l, ""});
          break;
        case Space::Pair:
          push({Space::Pair, f.type_map_syn.at(r.ref.name), f.type_map_know.at(r.ref.name2)});
          break;
        default: break;
      }
    }
  }
  for (auto& [key, value] : out.params)
    value = key == "prose" ? map_prose(f, a, value) : map_symbol(f, a, value);
  return out;
}

}  // namespace agentarch
