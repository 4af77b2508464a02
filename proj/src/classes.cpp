#include "sae/classes.hpp"

#include <unordered_set>

namespace sae {

PrototypeSet::PrototypeSet(std::vector<ClassId> class_ids, DenseMatrix protos)
    : ids_(std::move(class_ids)), protos_(std::move(protos)) {
  if (static_cast<Index>(ids_.size()) != protos_.cols()) {
    throw DataError("PrototypeSet: " + std::to_string(ids_.size()) + " class ids for " +
                    std::to_string(protos_.cols()) + " prototype columns");
  }
  std::unordered_set<ClassId> seen;
  for (const auto& id : ids_)
    if (!seen.insert(id).second) throw DataError("PrototypeSet: duplicate class id '" + id + "'");
  if (!matlin::all_finite(protos_)) throw DataError("PrototypeSet: non-finite prototype entries");
}

std::optional<Index> PrototypeSet::index_of(const ClassId& id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return static_cast<Index>(i);
  return std::nullopt;
}

PrototypeSet PrototypeSet::subset(const std::vector<ClassId>& ids) const {
  DenseMatrix out(dim(), static_cast<Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto idx = index_of(ids[j]);
    if (!idx) throw DataError("no semantic prototype for class '" + ids[j] + "'");
    out.col(static_cast<Index>(j)) = protos_.col(*idx);
  }
  return PrototypeSet(ids, std::move(out));
}

DenseMatrix PrototypeSet::per_sample(const std::vector<ClassId>& labels) const {
  DenseMatrix out(dim(), static_cast<Index>(labels.size()));
  std::optional<Index> last;
  const ClassId* last_id = nullptr;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!last_id || *last_id != labels[i]) {
      last = index_of(labels[i]);
      if (!last) throw DataError("no semantic prototype for class '" + labels[i] + "'");
      last_id = &labels[i];
    }
    out.col(static_cast<Index>(i)) = protos_.col(*last);
  }
  return out;
}

std::vector<ClassId> unique_in_order(const std::vector<ClassId>& labels) {
  std::vector<ClassId> out;
  std::unordered_set<ClassId> seen;
  for (const auto& l : labels)
    if (seen.insert(l).second) out.push_back(l);
  return out;
}

}  // namespace sae
