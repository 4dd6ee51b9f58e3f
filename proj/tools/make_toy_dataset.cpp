// Regenerates the bundled toy crossing dataset (train and test splits).

#include <iostream>

#include "navigan/toy.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data/toy_crossing";
  std::filesystem::create_directories(dir);

  navigan::ToyConfig train_cfg;
  train_cfg.seed = 7;
  navigan::ToyConfig test_cfg;
  test_cfg.seed = 1234;

  navigan::write_scene(dir / "toy_train.txt", navigan::make_toy_crossing(train_cfg));
  navigan::write_scene(dir / "toy_test.txt", navigan::make_toy_crossing(test_cfg));
  std::cout << "wrote toy crossing scenes to " << dir.string() << "\n";
  return 0;
}
