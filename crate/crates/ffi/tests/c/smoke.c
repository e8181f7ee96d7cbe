#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qdt.h"

#define CHECK(cond)                                                         \
  do {                                                                      \
    if (!(cond)) {                                                          \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,        \
              qdt_last_error_message());                                    \
      return 1;                                                             \
    }                                                                       \
  } while (0)

int main(void) {
  QdtTree *tree = NULL;
  CHECK(qdt_tree_parse("(((I//H)+I)//((Z+(D*(S//T)))*X))", &tree) == QDT_STATUS_OK);
  CHECK(qdt_tree_strategy_count(tree) == 4);

  QdtStrategyList *list = NULL;
  CHECK(qdt_tree_enumerate(tree, 64, &list) == QDT_STATUS_OK);
  CHECK(qdt_strategy_list_len(list) == 4);
  QdtStrategyInfo info;
  CHECK(qdt_strategy_list_get(list, 1, &info) == QDT_STATUS_OK);
  CHECK(fabs(info.p1 - 1.0) < 1e-9 && fabs(info.weight - 0.25) < 1e-15);
  char *text = NULL;
  CHECK(qdt_strategy_list_text(list, 0, &text) == QDT_STATUS_OK);
  CHECK(strcmp(text, "(I+I)") == 0);
  qdt_string_free(text);
  qdt_strategy_list_free(list);

  QdtTree *bad = NULL;
  CHECK(qdt_tree_parse("H+*X", &bad) == QDT_STATUS_PARSE_ERROR);
  CHECK(strstr(qdt_last_error_message(), "position 2") != NULL);

  QdtHistory *history = NULL;
  CHECK(qdt_history_generate(1000, 0.5, 7, &history) == QDT_STATUS_OK);
  CHECK(qdt_history_len(history) == 1000);

  QdtRunReport report;
  CHECK(qdt_simulate(tree, history, 3, NULL, &report) == QDT_STATUS_OK);
  CHECK(report.n == 1000);

  QdtGpConfig cfg = qdt_gp_config_default();
  cfg.population_size = 20;
  cfg.generations = 5;
  QdtEvolution *run = NULL;
  CHECK(qdt_evolve(&cfg, history, &run) == QDT_STATUS_OK);
  CHECK(qdt_evolution_generations(run) == 5);

  qdt_evolution_free(run);
  qdt_history_free(history);
  qdt_tree_free(tree);
  printf("ok\n");
  return 0;
}
