#include "chrl/prove.hpp"
