#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sae/matlin/dense.hpp"

namespace sae {

using ClassId = std::string;

/// Ordered class ids with one semantic prototype per column.
class PrototypeSet {
 public:
  PrototypeSet() = default;
  /// Throws DataError on duplicate ids, a count mismatch, or non-finite entries.
  PrototypeSet(std::vector<ClassId> class_ids, DenseMatrix protos);

  const std::vector<ClassId>& class_ids() const { return ids_; }
  const DenseMatrix& protos() const { return protos_; }
  Index size() const { return protos_.cols(); }
  Index dim() const { return protos_.rows(); }
  bool empty() const { return ids_.empty(); }

  std::optional<Index> index_of(const ClassId& id) const;
  bool contains(const ClassId& id) const { return index_of(id).has_value(); }

  /// Prototypes of `ids`, in that order. Throws DataError for an unknown id.
  PrototypeSet subset(const std::vector<ClassId>& ids) const;

  /// k×N matrix whose column i is the prototype of labels[i].
  DenseMatrix per_sample(const std::vector<ClassId>& labels) const;

 private:
  std::vector<ClassId> ids_;
  DenseMatrix protos_;
};

/// Distinct ids in order of first appearance.
std::vector<ClassId> unique_in_order(const std::vector<ClassId>& labels);

}  // namespace sae
