#include "chrl/analysis.hpp"
