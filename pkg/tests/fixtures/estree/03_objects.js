var point = { x: 1, y: 2, "quoted": 3, 42: 4 };
var short = { x, y };
var methods = {
  plain: function () { return 1; },
  shorthand() { return 2; },
  get value() { return 3; },
  set value(v) { this.cache = v; }
};
var arr = [1, "two", [3, 4], { five: 5 }];
var nested = point.x + methods.plain() + arr[2][0];
