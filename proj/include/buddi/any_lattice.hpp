// Copyright 2026 The BuDDI-Sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BUDDI_ANY_LATTICE_HPP_
#define BUDDI_ANY_LATTICE_HPP_

#include <memory>
#include <typeinfo>

#include "buddi/lattice.hpp"

namespace buddi::runtime {

// Type-erased lattice value, so one worker can hold collections of
// different lattice types by name.
class AnyLattice {
 public:
  template <lattice::MergeLattice L>
  AnyLattice(L value)  // NOLINT(google-explicit-constructor)
      : self_(std::make_unique<Model<L>>(std::move(value))) {}

  AnyLattice(const AnyLattice& other) : self_(other.self_->clone()) {}
  AnyLattice& operator=(const AnyLattice& other) {
    if (this != &other) self_ = other.self_->clone();
    return *this;
  }
  AnyLattice(AnyLattice&&) noexcept = default;
  AnyLattice& operator=(AnyLattice&&) noexcept = default;

  // Throws lattice::TypeMismatch when the held types differ.
  bool join(const AnyLattice& other) {
    if (self_->type() != other.self_->type()) {
      throw lattice::TypeMismatch(std::string("cannot merge ") + other.self_->type().name() + " into " +
                                  self_->type().name());
    }
    return self_->join(*other.self_);
  }

  template <typename L>
  const L& as() const {
    auto* m = dynamic_cast<const Model<L>*>(self_.get());
    if (m == nullptr) throw lattice::TypeMismatch(std::string("collection does not hold ") + typeid(L).name());
    return m->value;
  }

  const std::type_info& type() const { return self_->type(); }

  friend bool operator==(const AnyLattice& a, const AnyLattice& b) {
    return a.type() == b.type() && a.self_->equals(*b.self_);
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual std::unique_ptr<Concept> clone() const = 0;
    virtual bool join(const Concept& other) = 0;
    virtual bool equals(const Concept& other) const = 0;
    virtual const std::type_info& type() const = 0;
  };

  template <typename L>
  struct Model final : Concept {
    explicit Model(L v) : value(std::move(v)) {}
    std::unique_ptr<Concept> clone() const override { return std::make_unique<Model>(value); }
    bool join(const Concept& other) override { return value.join(static_cast<const Model&>(other).value); }
    bool equals(const Concept& other) const override { return value == static_cast<const Model&>(other).value; }
    const std::type_info& type() const override { return typeid(L); }
    L value;
  };

  std::unique_ptr<Concept> self_;
};

}  // namespace buddi::runtime

#endif  // BUDDI_ANY_LATTICE_HPP_
