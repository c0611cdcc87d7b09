#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "basespace/complete.hpp"
#include "basespace/funcspace.hpp"
#include "basespace/integrate.hpp"
#include "basespace/uspace.hpp"

namespace basespace {

using Json = nlohmann::ordered_json;

struct NetDoc {
  std::string space;
  LassoNet net;
};

struct BiNetDoc {
  std::string space;
  LassoBiNet net;
};

struct MapDoc {
  std::string source, target;
  SpaceMap map;
};

/// Sequences keep their descriptor so they can be written back.
struct SequenceDoc {
  Json descriptor;
  CompletionPoint point;
};

struct FunctionDoc {
  Json descriptor;
  FunctionSeq seq;
  std::optional<Expr> limit;
  Region region;
};

struct ProductDoc {
  std::vector<std::string> factors;  // space names, one per index
  ProductSpec spec;
  ZFamily z;
  Json z_descriptor;
};

struct IntegralDoc {
  Json descriptor;
  AtomAlgebra algebra;
  ModuleSpec module;
  VectorMeasure measure;
  Integrand integrand;
  IntegrateOptions options;
};

/// Named objects from one or more documents. Names are unique across every
/// section; maps are ordered so every listing is deterministic.
struct Workspace {
  std::map<std::string, GradedBase> spaces;
  std::map<std::string, NetDoc> nets;
  std::map<std::string, BiNetDoc> binets;
  std::map<std::string, MapDoc> maps;
  std::map<std::string, UStructureFin> ustructures;
  std::map<std::string, UniformityFin> uniformities;
  std::map<std::string, SequenceDoc> sequences;
  std::map<std::string, FunctionDoc> functions;
  std::map<std::string, ProductDoc> products;
  std::map<std::string, IntegralDoc> integrals;

  bool contains(const std::string& name) const;
  const GradedBase& space(const std::string& name) const;
  const NetDoc& net(const std::string& name) const;
  std::size_t size() const;
};

/// Parses one document into `ws`. All-or-nothing: on any error `ws` is left
/// unchanged and InputError is thrown naming the line and column (syntax) or
/// the object and the violated rule (validation).
void load_document(Workspace& ws, const std::string& text, const std::string& origin = "<input>");
Workspace load_files(const std::vector<std::string>& paths);

/// Document form of the workspace; load_document(serialize(ws)) rebuilds an
/// equal workspace.
Json serialize(const Workspace& ws);

Json space_json(const GradedBase& base);
Json net_json(const FinSpace& space, const LassoNet& u);
Json set_json(const FinSpace& space, PointSet s);
Json rational_json(const Rational& x);

}  // namespace basespace
