#pragma once

#include <ramcat/fincat.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ramcat {

/// A forgetful functor U: upstairs -> downstairs given by explicit object and morphism tables.
/// Upstairs morphisms are identified with their images, so lifts are looked up by
/// (upstairs domain, upstairs codomain, downstairs morphism).
class ExpansionFunctor {
public:
    ExpansionFunctor() = default;

    ExpansionFunctor(FiniteCategory upstairs, FiniteCategory downstairs, std::vector<ObjectId> object_map,
        std::vector<MorphismId> morphism_map) :
        upstairs_(std::move(upstairs)),
        downstairs_(std::move(downstairs)),
        object_map_(std::move(object_map)),
        morphism_map_(std::move(morphism_map))
    {
        if (object_map_.size() != upstairs_.object_count() || morphism_map_.size() != upstairs_.morphism_count())
            throw Error("ExpansionFunctor: map sizes do not match the upstairs category");
        if (upstairs_.object_count() >= (std::size_t{1} << 16))
            throw Error("ExpansionFunctor: too many upstairs objects");
        fibers_.resize(downstairs_.object_count());
        for (ObjectId up = 0; up < object_map_.size(); ++up) {
            if (!downstairs_.has_object(object_map_[up]))
                throw Error("ExpansionFunctor: object map points outside the downstairs category");
            fibers_[object_map_[up]].push_back(up);
        }
        for (MorphismId u = 0; u < morphism_map_.size(); ++u) {
            if (morphism_map_[u] >= downstairs_.morphism_count())
                throw Error("ExpansionFunctor: morphism map points outside the downstairs category");
            lifts_.emplace(key(upstairs_.dom(u), upstairs_.cod(u), morphism_map_[u]), u);
        }
    }

    [[nodiscard]] auto upstairs() const -> const FiniteCategory& { return upstairs_; }
    [[nodiscard]] auto downstairs() const -> const FiniteCategory& { return downstairs_; }
    [[nodiscard]] auto map_object(ObjectId up) const -> ObjectId { return object_map_.at(up); }
    [[nodiscard]] auto map_morphism(MorphismId u) const -> MorphismId { return morphism_map_.at(u); }
    [[nodiscard]] auto object_map() const -> std::span<const ObjectId> { return object_map_; }
    [[nodiscard]] auto morphism_map() const -> std::span<const MorphismId> { return morphism_map_; }

    /// U^{-1}(a), ascending upstairs id order.
    [[nodiscard]] auto fiber(ObjectId a) const -> std::span<const ObjectId> { return fibers_.at(a); }

    /// The upstairs morphism up_dom -> up_cod whose image is `down`, if any.
    [[nodiscard]] auto lift(ObjectId up_dom, ObjectId up_cod, MorphismId down) const -> std::optional<MorphismId>
    {
        auto it = lifts_.find(key(up_dom, up_cod, down));
        if (it == lifts_.end())
            return std::nullopt;
        return it->second;
    }

    /// Upstairs objects lying over the given downstairs objects, ascending id order.
    [[nodiscard]] auto preimage(std::span<const ObjectId> downstairs_objects) const -> std::vector<ObjectId>
    {
        std::vector<ObjectId> result;
        for (auto a : downstairs_objects)
            for (auto up : fiber(a))
                result.push_back(up);
        std::sort(result.begin(), result.end());
        return result;
    }

private:
    static auto key(ObjectId dom, ObjectId cod, MorphismId down) -> std::uint64_t
    {
        return (static_cast<std::uint64_t>(dom) << 48) | (static_cast<std::uint64_t>(cod) << 32) | down;
    }

    FiniteCategory upstairs_;
    FiniteCategory downstairs_;
    std::vector<ObjectId> object_map_;
    std::vector<MorphismId> morphism_map_;
    std::vector<std::vector<ObjectId>> fibers_;
    std::unordered_multimap<std::uint64_t, MorphismId> lifts_;
};

} // namespace ramcat
