#include "wardflow/categories.hpp"

#include <istream>

namespace wardflow {

const std::vector<std::string>& cultural_categories() {
  static const std::vector<std::string> kList = {
      "Museum",
      "History Museum",
      "Science Museum",
      "Art Museum",
      "Art Gallery",
      "Theater",
      "Indie Theater",
      "Movie Theater",
      "Indie Movie Theater",
      "Multiplex",
      "Drive-in Theater",
      "Library",
      "Park",
      "Concert Hall",
      "Opera House",
      "Planetarium",
      "Aquarium",
      "Zoo",
      "Botanical Garden",
      "Sculpture Garden",
      "Garden",
      "Historic Site",
      "Heritage Site",
      "Memorial Site",
      "Archaeological Site",
      "Monument / Landmark",
      "Castle",
      "Palace",
      "Temple",
      "Church",
      "Cathedral",
      "Synagogue",
      "Mosque",
      "Performing Arts Venue",
      "Dance Studio",
      "Jazz Club",
      "Rock Club",
      "Music Venue",
      "Comedy Club",
      "Public Art",
      "Street Art",
      "Outdoor Sculpture",
      "Cultural Center",
      "Community Center",
      "Arts & Crafts Store",
      "Antique Shop",
      "Bookstore",
      "Used Bookstore",
      "Record Shop",
      "Art Studio",
      "Photography Studio",
      "Film Studio",
      "Amphitheater",
      "Auditorium",
      "Exhibit",
      "Fair",
      "Festival",
      "Circus",
  };
  return kList;
}

const std::vector<std::string>& ordinary_categories() {
  static const std::vector<std::string> kList = {
      "Cafe",
      "Coffee Shop",
      "Bar",
      "Pub",
      "Restaurant",
      "Fast Food Restaurant",
      "Pizza Place",
      "Sandwich Place",
      "Bakery",
      "Grocery Store",
      "Supermarket",
      "Convenience Store",
      "Clothing Store",
      "Shoe Store",
      "Electronics Store",
      "Hardware Store",
      "Pharmacy",
      "Bank",
      "Post Office",
      "Gym",
      "Stadium",
      "Hotel",
      "Hostel",
      "Office",
      "Coworking Space",
      "Train Station",
      "Bus Station",
      "Metro Station",
      "Gas Station",
      "Parking",
      "School",
      "University",
      "Hospital",
      "Nightclub",
      "Lounge",
      "Food Truck",
      "Market",
      "Salon / Barbershop",
  };
  return kList;
}

std::set<std::string> cultural_category_set() {
  const std::vector<std::string>& list = cultural_categories();
  return {list.begin(), list.end()};
}

std::set<std::string> load_categories(std::istream& in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.insert(line);
  }
  return out;
}

}  // namespace wardflow
