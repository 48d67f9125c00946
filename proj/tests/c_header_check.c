/* The public header must compile as C. */
#include <stdio.h>

#include "igabeam/igabeam.h"

int main(void) {
  igab_variant v;
  if (igab_parse_variant("lu-l", &v) != IGAB_OK || v != IGAB_VARIANT_LU_L) return 1;
  printf("igabeam %s\n", igab_version());
  return 0;
}
