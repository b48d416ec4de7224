#include "stratmob/nco.hpp"

#include <unordered_map>

namespace stratmob::nco {

const std::vector<Group>& groups() {
    static const std::vector<Group> table = {
        {"00", "Physical Scientists"},
        {"01", "Physical Science Technicians"},
        {"02", "Architects, Engineers, Technologists and Surveyors"},
        {"03", "Engineering Technicians"},
        {"04", "Aircraft and Ships Officers"},
        {"05", "Life Scientists"},
        {"06", "Life Science Technicians"},
        {"07", "Physicians and Surgeons (Allopathic Dental and Veterinary Surgeons)"},
        {"08", "Nursing and other Medical and Health Technicians"},
        {"09", "Scientific, Medical and Technical Persons, Other"},
        {"10", "Mathematicians, Statisticians and Related Workers"},
        {"11", "Economists and Related Workers"},
        {"12", "Accountants, Auditors and Related Workers"},
        {"13", "Social Scientists and Related Workers"},
        {"14", "Jurists"},
        {"15", "Teachers"},
        {"16", "Poets, Authors, Journalists and Related Workers"},
        {"17", "Sculptors, Painters, Photographers and Related Creative Artists"},
        {"18", "Composers and Performing Artists"},
        {"19", "Professional Workers, n.e.c."},
        {"20", "Elected and Legislative Officials"},
        {"21", "Administrative and Executive Officials Government and Local Bodies"},
        {"22", "Working Proprietors, Directors and Managers, Wholesale and Retail Trade"},
        {"23", "Directors and Managers, Financial Institutions"},
        {"24", "Working Proprietors, Directors and Managers Mining, Construction, Manufacturing and Related Concerns"},
        {"25", "Working Proprietors, Directors, Managers and Related Executives, Transport, Storage and Communication"},
        {"26", "Working Proprietors, Directors and Managers, Other Service"},
        {"29", "Administrative, Executive and Managerial Workers, n.e.c."},
        {"30", "Clerical and Other Supervisors"},
        {"31", "Village Officials"},
        {"32", "Stenographers, Typists and Card and Tape Punching Operators"},
        {"33", "Book-keepers, Cashiers and Related Workers"},
        {"34", "Computing Machine Operators"},
        {"35", "Clerical and Related Workers, n.e.c."},
        {"36", "Transport and Communication Supervisors"},
        {"37", "Transport Conductors and Guards"},
        {"38", "Mail Distributors and Related Workers"},
        {"39", "Telephone and Telegraph Operators"},
        {"40", "Merchants and Shopkeepers, Wholesale and Retail Trade"},
        {"41", "Manufacturers, Agents"},
        {"42", "Technical Salesmen and Commercial Travellers"},
        {"43", "Salesmen, Shop Assistants and Related Workers"},
        {"44", "Insurance, Real Estate, Securities and Business Service Salesmen and Auctioneers"},
        {"45", "Money Lenders and Pawn Brokers"},
        {"49", "Sales Workers, n.e.c."},
        {"50", "Hotel and Restaurant Keepers"},
        {"51", "House Keepers, Matron and Stewards (Domestic and Institutional)"},
        {"52", "Cooks, Waiters, Bartenders and Related Worker (Domestic and Institutional)"},
        {"53", "Maids and Other House Keeping Service Workers n.e.c."},
        {"54", "Building Caretakers, Sweepers, Cleaners and Related Workers"},
        {"55", "Launderers, Dry-cleaners and Pressers"},
        {"56", "Hair Dressers, Barbers, Beauticians and Related Workers"},
        {"57", "Protective Service Workers"},
        {"59", "Service Workers, n.e.c."},
        {"60", "Farm Plantation, Dairy and Other Managers and Supervisors"},
        {"61", "Cultivators"},
        {"62", "Farmers other than Cultivators"},
        {"63", "Agricultural Labourers"},
        {"64", "Plantation Labourers and Related Workers"},
        {"65", "Other Farm Workers"},
        {"66", "Forestry Workers"},
        {"67", "Hunters and Related Workers"},
        {"68", "Fishermen and Related Workers"},
        {"71", "Miners, Quarrymen, Well Drillers and Related Workers"},
        {"72", "Metal Processors"},
        {"73", "Wood Preparation Workers and Paper Makers"},
        {"74", "Chemical Processors and Related Workers"},
        {"75", "Spinners, Weavers, Knitters, Dyers and Related Workers"},
        {"76", "Tanners, Fellmongers and Pelt Dressers"},
        {"77", "Food and Beverage Processors"},
        {"78", "Tobacco Preparers and Tobacco Product Makers"},
        {"79", "Tailors, Dress Makers, Sewers, Upholsterers and Related Workers"},
        {"80", "Shoe makers and Leather Goods Makers"},
        {"81", "Carpenters, Cabinet and Related Wood Workers"},
        {"82", "Stone Cutters and Carvers"},
        {"83", "Blacksmiths, Tool Makers and Machine Tool Operators"},
        {"84", "Machinery Fitters, Machine Assemblers and Precision Instrument Makers (except Electrical)"},
        {"85", "Electrical Fitters and Related Electrical and Electronic Workers"},
        {"86", "Broadcasting Station and Sound Equipment Operators and Cinema Projectionists"},
        {"87", "Plumbers, Welders, Sheet Metal and Structural Metal Preparers and Erectors"},
        {"88", "Jewellery and Precious Metal Workers and Metal Engravers (Except Printing)"},
        {"89", "Glass Formers, Potters and Related Workers"},
        {"90", "Rubber and Plastic Product Makers"},
        {"91", "Paper and Paper Board Products Makers"},
        {"92", "Printing and Related Workers"},
        {"93", "Painters"},
        {"94", "Production and Related Workers, n.e.c."},
        {"95", "Bricklayers and Other Constructions Workers"},
        {"96", "Stationery Engines and Related Equipment Operators, Oilers and Greasers"},
        {"97", "Material Handling and Related Equipment Operators, Loaders and Unloaders"},
        {"98", "Transport Equipment Operators"},
        {"99", "Labourers, n.e.c."},
    };
    return table;
}

namespace {
const std::unordered_map<std::string, std::string>& index() {
    static const std::unordered_map<std::string, std::string> m = [] {
        std::unordered_map<std::string, std::string> out;
        for (const auto& g : groups()) out.emplace(g.code, g.title);
        return out;
    }();
    return m;
}
}  // namespace

bool is_valid_code(const std::string& code) { return index().count(code) > 0; }

std::string title(const std::string& code) {
    auto it = index().find(code);
    return it == index().end() ? std::string{} : it->second;
}

}  // namespace stratmob::nco
