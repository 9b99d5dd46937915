#include "chrl/certify.hpp"
