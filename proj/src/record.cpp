#include "mh/record.hpp"

#include "mh/canonical.hpp"
#include "mh/error.hpp"
#include "mh/text.hpp"

namespace mh {

const char* field_name(FieldName f) {
    switch (f) {
    case FieldName::Identifier: return "Identifier";
    case FieldName::Creator: return "Creator";
    case FieldName::Title: return "Title";
    case FieldName::Publisher: return "Publisher";
    case FieldName::Date: return "Date";
    case FieldName::Subject: return "Subject";
    case FieldName::Contributor: return "Contributor";
    case FieldName::ResourceType: return "ResourceType";
    case FieldName::Description: return "Description";
    case FieldName::DataCenter: return "DataCenter";
    case FieldName::Relation: return "Relation";
    case FieldName::Format: return "Format";
    case FieldName::Language: return "Language";
    case FieldName::Rights: return "Rights";
    }
    return "?";
}

void ParsedRecord::recompute_presence() {
    presence = 0;
    auto set_if = [this](FieldName f, bool present) {
        if (present)
            presence |= field_bit(f);
    };
    set_if(FieldName::Identifier, primary_identifier.has_value() || !alternate_identifiers.empty());
    set_if(FieldName::Creator, !creators.empty());
    set_if(FieldName::Title, !titles.empty());
    set_if(FieldName::Publisher, publisher_raw.has_value() && !publisher_raw->empty());
    set_if(FieldName::Date, !date_values.empty());
    set_if(FieldName::Subject, !subjects.empty());
    set_if(FieldName::Contributor, !contributors.empty());
    set_if(FieldName::ResourceType, resource_type_raw.has_value());
    set_if(FieldName::Description, !descriptions.empty());
    set_if(FieldName::DataCenter, !data_center_id.empty());
    set_if(FieldName::Relation, !relations_raw.empty());
    set_if(FieldName::Format, !formats.empty());
    set_if(FieldName::Language, !languages_raw.empty());
    set_if(FieldName::Rights, !rights.empty());
}

const char* date_kind_name(DateKind k) {
    switch (k) {
    case DateKind::Accepted: return "Accepted";
    case DateKind::Available: return "Available";
    case DateKind::Copyrighted: return "Copyrighted";
    case DateKind::Collected: return "Collected";
    case DateKind::Created: return "Created";
    case DateKind::Issued: return "Issued";
    case DateKind::Submitted: return "Submitted";
    case DateKind::Updated: return "Updated";
    case DateKind::Valid: return "Valid";
    }
    return "?";
}

std::optional<DateKind> date_kind_from(std::string_view name) {
    std::string key = text::to_lower(text::trim(name));
    if (key == "accepted") return DateKind::Accepted;
    if (key == "available") return DateKind::Available;
    if (key == "copyrighted") return DateKind::Copyrighted;
    if (key == "collected") return DateKind::Collected;
    if (key == "created") return DateKind::Created;
    if (key == "issued") return DateKind::Issued;
    if (key == "submitted") return DateKind::Submitted;
    if (key == "updated") return DateKind::Updated;
    if (key == "valid") return DateKind::Valid;
    return std::nullopt;
}

const char* resource_type_name(ResourceType t) {
    switch (t) {
    case ResourceType::Dataset: return "Dataset";
    case ResourceType::Text: return "Text";
    case ResourceType::Image: return "Image";
    case ResourceType::Collection: return "Collection";
    case ResourceType::Software: return "Software";
    case ResourceType::Audiovisual: return "Audiovisual";
    case ResourceType::Film: return "Film";
    case ResourceType::PhysicalObject: return "PhysicalObject";
    case ResourceType::Event: return "Event";
    case ResourceType::Model: return "Model";
    case ResourceType::InteractiveResource: return "InteractiveResource";
    case ResourceType::Sound: return "Sound";
    case ResourceType::Workflow: return "Workflow";
    case ResourceType::Service: return "Service";
    case ResourceType::Other: return "Other";
    }
    return "?";
}

std::optional<ResourceType> resource_type_from_name(std::string_view name) {
    for (int i = 0; i < kResourceTypeCount; ++i) {
        auto t = static_cast<ResourceType>(i);
        if (name == resource_type_name(t))
            return t;
    }
    return std::nullopt;
}

const char* quality_flag_name(QualityFlag f) {
    switch (f) {
    case QualityFlag::EmptyRecord: return "EmptyRecord";
    case QualityFlag::YearOutOfRange: return "YearOutOfRange";
    case QualityFlag::MultiplePublicationYears: return "MultiplePublicationYears";
    case QualityFlag::UnknownResourceType: return "UnknownResourceType";
    case QualityFlag::DatasetLikeOther: return "DatasetLikeOther";
    case QualityFlag::AmbiguousLanguage: return "AmbiguousLanguage";
    case QualityFlag::UnparseableDate: return "UnparseableDate";
    }
    return "?";
}

std::optional<QualityFlag> quality_flag_from(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(QualityFlag::UnparseableDate); ++i) {
        auto f = static_cast<QualityFlag>(i);
        if (name == quality_flag_name(f))
            return f;
    }
    return std::nullopt;
}

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::invalid_request: return "invalid_request";
    case Errc::malformed_response: return "malformed_response";
    case Errc::malformed_metadata: return "malformed_metadata";
    case Errc::malformed_symbol: return "malformed_symbol";
    case Errc::protocol: return "protocol";
    case Errc::transport: return "transport";
    case Errc::storage: return "storage";
    case Errc::missing_registry: return "missing_registry";
    case Errc::empty_input: return "empty_input";
    case Errc::invalid_range: return "invalid_range";
    case Errc::config: return "config";
    case Errc::stage_dependency: return "stage_dependency";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io: return "io";
    }
    return "?";
}

} // namespace mh
