/* End-to-end use of the C interface: build a small table, encode it under
 * the intersection language, mine the closed patterns, and print each
 * pattern's support and plain-text meaning. Compile against
 * include/rangemine.h and link with -lrangemine_ffi. */

#include <stdio.h>
#include <stdlib.h>

#include "rangemine.h"

static void fail(const char *where) {
  const char *msg = rm_last_error();
  fprintf(stderr, "%s: %s\n", where, msg ? msg : "(no message)");
  exit(1);
}

int main(void) {
  printf("version %s\n", rm_version());

  RmTable *table = rm_table_new();
  const double lengths[3] = {0.5, 2.4, 2.5};
  if (rm_table_add_point_column(table, "len", lengths, 3) != RM_STATUS_OK)
    fail("add len");
  const double lo[3] = {0.0, 1.0, 2.0};
  const double hi[3] = {2.0, 4.0, 3.0};
  if (rm_table_add_interval_column(table, "wid", lo, hi, 3) != RM_STATUS_OK)
    fail("add wid");

  RmDataset *dataset = NULL;
  if (rm_dataset_encode(table, RM_LANGUAGE_I, 2, NULL, 0, &dataset) !=
      RM_STATUS_OK)
    fail("encode");
  rm_table_free(table);

  RmConcepts *concepts = NULL;
  if (rm_mine(dataset, 1, &concepts) != RM_STATUS_OK)
    fail("mine");

  size_t n = rm_concepts_count(concepts);
  printf("concepts %zu\n", n);
  for (size_t i = 0; i < n; i++) {
    size_t support = 0;
    if (rm_concepts_support(concepts, i, &support) != RM_STATUS_OK)
      fail("support");
    char *text = NULL;
    if (rm_concepts_interpretation(concepts, i, &text) != RM_STATUS_OK)
      fail("interpretation");
    printf("%zu\t%s\n", support, text);
    rm_string_free(text);
  }

  /* Failing calls return a status code and leave a readable message. */
  RmDataset *bad = NULL;
  RmStatus status = rm_dataset_encode(NULL, RM_LANGUAGE_I, 2, NULL, 0, &bad);
  printf("null-table status %d message %s\n", (int)status, rm_last_error());

  rm_concepts_free(concepts);
  rm_dataset_free(dataset);
  return 0;
}
