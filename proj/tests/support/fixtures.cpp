#include "support/fixtures.hpp"

#include "mh/cleaning.hpp"
#include "mh/xml.hpp"

namespace mh::test {

namespace {

std::string esc(const std::string& s) {
    return xml::escape(s);
}

std::string datacite_payload(const RecordSpec& s) {
    std::string x;
    x += "<oai_datacite xmlns=\"http://schema.datacite.org/oai/oai-1.0/\">";
    x += "<isReferenceQuality>true</isReferenceQuality>";
    x += "<schemaVersion>3.1</schemaVersion>";
    x += "<datacentreSymbol>" + esc(s.set_spec) + "</datacentreSymbol>";
    if (!s.empty_payload) {
        x += "<payload><resource xmlns=\"http://datacite.org/schema/kernel-3\">";
        if (!s.doi.empty())
            x += "<identifier identifierType=\"DOI\">" + esc(s.doi) + "</identifier>";
        if (!s.creators.empty()) {
            x += "<creators>";
            for (const auto& c : s.creators)
                x += "<creator><creatorName>" + esc(c) + "</creatorName></creator>";
            x += "</creators>";
        }
        if (!s.titles.empty()) {
            x += "<titles>";
            for (const auto& t : s.titles)
                x += "<title>" + esc(t) + "</title>";
            x += "</titles>";
        }
        if (!s.publisher.empty())
            x += "<publisher>" + esc(s.publisher) + "</publisher>";
        if (!s.dates.empty()) {
            // merged-form values: bare years render as publicationYear,
            // "Kind:value" as typed dates
            std::string dates_block;
            for (const auto& d : s.dates) {
                size_t colon = d.find(':');
                if (colon == std::string::npos) {
                    x += "<publicationYear>" + esc(d) + "</publicationYear>";
                } else {
                    dates_block += "<date dateType=\"" + esc(d.substr(0, colon)) + "\">" +
                                   esc(d.substr(colon + 1)) + "</date>";
                }
            }
            if (!dates_block.empty())
                x += "<dates>" + dates_block + "</dates>";
        }
        if (!s.subjects.empty()) {
            x += "<subjects>";
            for (const auto& v : s.subjects)
                x += "<subject>" + esc(v) + "</subject>";
            x += "</subjects>";
        }
        if (!s.contributors.empty()) {
            x += "<contributors>";
            for (const auto& v : s.contributors)
                x += "<contributor contributorType=\"DataCollector\"><contributorName>" + esc(v) +
                     "</contributorName></contributor>";
            x += "</contributors>";
        }
        if (!s.type_general.empty() || !s.type_subtype.empty())
            x += "<resourceType resourceTypeGeneral=\"" + esc(s.type_general) + "\">" +
                 esc(s.type_subtype) + "</resourceType>";
        if (!s.descriptions.empty()) {
            x += "<descriptions>";
            for (const auto& v : s.descriptions)
                x += "<description descriptionType=\"Abstract\">" + esc(v) + "</description>";
            x += "</descriptions>";
        }
        if (!s.relations.empty()) {
            x += "<relatedIdentifiers>";
            for (const auto& v : s.relations)
                x += "<relatedIdentifier relatedIdentifierType=\"DOI\">" + esc(v) +
                     "</relatedIdentifier>";
            x += "</relatedIdentifiers>";
        }
        if (!s.formats.empty()) {
            x += "<formats>";
            for (const auto& v : s.formats)
                x += "<format>" + esc(v) + "</format>";
            x += "</formats>";
        }
        for (const auto& v : s.languages)
            x += "<language>" + esc(v) + "</language>";
        if (!s.rights.empty()) {
            x += "<rightsList>";
            for (const auto& v : s.rights)
                x += "<rights>" + esc(v) + "</rights>";
            x += "</rightsList>";
        }
        x += "</resource></payload>";
    }
    x += "</oai_datacite>";
    return x;
}

std::string dc_payload(const RecordSpec& s) {
    std::string x;
    x += "<oai_dc:dc xmlns:oai_dc=\"http://www.openarchives.org/OAI/2.0/oai_dc/\" "
         "xmlns:dc=\"http://purl.org/dc/elements/1.1/\">";
    if (!s.doi.empty())
        x += "<dc:identifier>" + esc(s.doi) + "</dc:identifier>";
    for (const auto& v : s.creators)
        x += "<dc:creator>" + esc(v) + "</dc:creator>";
    for (const auto& v : s.titles)
        x += "<dc:title>" + esc(v) + "</dc:title>";
    if (!s.publisher.empty())
        x += "<dc:publisher>" + esc(s.publisher) + "</dc:publisher>";
    for (const auto& v : s.dates)
        x += "<dc:date>" + esc(v) + "</dc:date>";
    for (const auto& v : s.subjects)
        x += "<dc:subject>" + esc(v) + "</dc:subject>";
    for (const auto& v : s.contributors)
        x += "<dc:contributor>" + esc(v) + "</dc:contributor>";
    if (!s.type_general.empty())
        x += "<dc:type>" + esc(s.type_general) + "</dc:type>";
    if (!s.type_subtype.empty())
        x += "<dc:type>" + esc(s.type_subtype) + "</dc:type>";
    for (const auto& v : s.descriptions)
        x += "<dc:description>" + esc(v) + "</dc:description>";
    for (const auto& v : s.relations)
        x += "<dc:relation>" + esc(v) + "</dc:relation>";
    for (const auto& v : s.formats)
        x += "<dc:format>" + esc(v) + "</dc:format>";
    for (const auto& v : s.languages)
        x += "<dc:language>" + esc(v) + "</dc:language>";
    for (const auto& v : s.rights)
        x += "<dc:rights>" + esc(v) + "</dc:rights>";
    x += "</oai_dc:dc>";
    return x;
}

} // namespace

std::string record_xml(const RecordSpec& s) {
    std::string x = "<record><header";
    if (s.deleted)
        x += " status=\"deleted\"";
    x += ">";
    x += "<identifier>" + esc(s.oai_identifier) + "</identifier>";
    x += "<datestamp>" + esc(s.datestamp) + "</datestamp>";
    if (!s.set_spec.empty())
        x += "<setSpec>" + esc(s.set_spec) + "</setSpec>";
    x += "</header>";
    if (!s.deleted) {
        x += "<metadata>";
        x += s.dc_dialect ? dc_payload(s) : datacite_payload(s);
        x += "</metadata>";
    }
    x += "</record>";
    return x;
}

std::string list_records_page(const std::vector<RecordSpec>& records,
                              const std::optional<std::string>& resumption_token,
                              std::optional<uint64_t> cursor,
                              std::optional<uint64_t> complete_list_size) {
    std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    x += "<OAI-PMH xmlns=\"http://www.openarchives.org/OAI/2.0/\">";
    x += "<responseDate>2016-04-01T00:00:00Z</responseDate>";
    x += "<request verb=\"ListRecords\">https://oai.example.org/oai</request>";
    x += "<ListRecords>";
    for (const auto& r : records)
        x += record_xml(r);
    if (resumption_token) {
        x += "<resumptionToken";
        if (complete_list_size)
            x += " completeListSize=\"" + std::to_string(*complete_list_size) + "\"";
        if (cursor)
            x += " cursor=\"" + std::to_string(*cursor) + "\"";
        x += ">" + esc(*resumption_token) + "</resumptionToken>";
    }
    x += "</ListRecords></OAI-PMH>";
    return x;
}

std::string get_record_page(const RecordSpec& record) {
    std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    x += "<OAI-PMH xmlns=\"http://www.openarchives.org/OAI/2.0/\">";
    x += "<responseDate>2016-04-01T00:00:00Z</responseDate>";
    x += "<request verb=\"GetRecord\">https://oai.example.org/oai</request>";
    x += "<GetRecord>" + record_xml(record) + "</GetRecord></OAI-PMH>";
    return x;
}

std::string error_page(const std::string& code, const std::string& message) {
    std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    x += "<OAI-PMH xmlns=\"http://www.openarchives.org/OAI/2.0/\">";
    x += "<responseDate>2016-04-01T00:00:00Z</responseDate>";
    x += "<request>https://oai.example.org/oai</request>";
    x += "<error code=\"" + esc(code) + "\">" + esc(message) + "</error>";
    x += "</OAI-PMH>";
    return x;
}

RecordSpec full_record(const std::string& oai_identifier) {
    RecordSpec s;
    s.oai_identifier = oai_identifier;
    s.set_spec = "BL.IMPERIAL";
    s.doi = "10.7299/X75M655M";
    s.creators = {"Sheldon, H. H."};
    s.titles = {"A. E. Borell with wildcat"};
    s.publisher = "Museum of Vertebrate Zoology";
    s.dates = {"1929", "Available:01/2/2005"};
    s.subjects = {"photographs"};
    s.contributors = {"Field Museum"};
    s.type_general = "Image";
    s.type_subtype = "Photograph";
    s.descriptions = {"A photograph taken in the field."};
    s.relations = {"10.15468/dl.qnbifh"};
    s.formats = {"image/jpeg"};
    s.languages = {"en"};
    s.rights = {"Public domain"};
    return s;
}

RecordSpec empty_record(const std::string& oai_identifier, const std::string& set_spec) {
    RecordSpec s;
    s.oai_identifier = oai_identifier;
    s.set_spec = set_spec;
    s.empty_payload = true;
    return s;
}

ParsedRecord make_parsed(const std::string& oai_identifier, const std::string& data_center,
                         const std::string& type_general, const std::string& subtype,
                         const std::string& publisher, const std::string& year,
                         const std::vector<std::string>& relations) {
    ParsedRecord p;
    p.oai_identifier = oai_identifier;
    p.data_center_id = data_center;
    if (!type_general.empty())
        p.resource_type_raw = ResourceTypeRaw{
            type_general, subtype.empty() ? std::nullopt : std::optional<std::string>(subtype)};
    if (!publisher.empty())
        p.publisher_raw = publisher;
    if (!year.empty())
        p.date_values.push_back(year);
    p.relations_raw = relations;
    p.recompute_presence();
    return p;
}

ParsedRecord random_parsed(std::mt19937_64& rng, const std::string& oai_identifier) {
    auto chance = [&rng](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    auto pick = [&rng](const std::vector<std::string>& options) {
        return options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
    };

    ParsedRecord p;
    p.oai_identifier = oai_identifier;
    p.data_center_id = pick({"BL.IMPERIAL", "CDL.DPLANET", "TIB.PANGAEA", "ETHZ.ECOLL"});
    if (chance(0.7))
        p.primary_identifier = "10." + std::to_string(1000 + (rng() % 9000)) + "/" +
                               std::to_string(rng() % 100000);
    if (chance(0.6))
        p.creators.push_back(pick({"Sheldon, H. H.", "Ada Lovelace", "Imperial College London"}));
    if (chance(0.8))
        p.titles.push_back("Record " + oai_identifier);
    if (chance(0.6))
        p.publisher_raw = pick({"Figshare", "ZENODO", "PANGAEA", "Weird Publisher"});
    if (chance(0.7))
        p.date_values.push_back(pick({"2005", "1929", "2150", "Available:01/2/2005", "junk"}));
    if (chance(0.3))
        p.subjects.push_back({pick({"physics", "biology"}), std::nullopt});
    if (chance(0.2))
        p.contributors.push_back({"Some Body", std::nullopt});
    if (chance(0.6))
        p.resource_type_raw =
            ResourceTypeRaw{pick({"Dataset", "Text", "Image", "Other", "Nonsense"}),
                            chance(0.5) ? std::optional<std::string>(pick({"Data sheet", "Report"}))
                                        : std::nullopt};
    if (chance(0.3))
        p.descriptions.push_back({"Abstract", "Some description"});
    if (chance(0.25))
        p.relations_raw.push_back(pick({"10.1234/abc", "arXiv:1234.5678", "https://example.org"}));
    if (chance(0.3))
        p.formats.push_back("text/csv");
    if (chance(0.5))
        p.languages_raw.push_back(pick({"en", "fr-en", "English", "xx"}));
    if (chance(0.3))
        p.rights.push_back("CC0");
    p.recompute_presence();
    return p;
}

store::StoredRecord make_stored(const ParsedRecord& parsed, const std::string& datestamp) {
    store::StoredRecord rec;
    rec.oai_identifier = parsed.oai_identifier;
    rec.latest_datestamp = datestamp;
    rec.parsed = parsed;
    rec.canonical = cleaning::canonicalize(parsed);
    rec.version_count = 1;
    return rec;
}

} // namespace mh::test
