#pragma once

#include <string_view>

// IRI vocabulary shared by ingestion, comparison export and the catalog.
namespace modeldelta::vocab {

inline constexpr std::string_view entity_prefix = "e:";
inline constexpr std::string_view attribute_prefix = "a:";
inline constexpr std::string_view relation_prefix = "r:";

inline constexpr std::string_view type = "m:type";
inline constexpr std::string_view contained_in = "m:containedIn";

inline constexpr std::string_view reified_prefix = "x:stmt";
inline constexpr std::string_view subject = "m:subject";
inline constexpr std::string_view predicate = "m:predicate";
inline constexpr std::string_view object = "m:object";
inline constexpr std::string_view in_model = "m:inModel";

inline bool is_attribute_predicate(std::string_view iri) { return iri.starts_with(attribute_prefix); }
inline bool is_relation_predicate(std::string_view iri) { return iri.starts_with(relation_prefix); }

}  // namespace modeldelta::vocab
