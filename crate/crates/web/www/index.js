import init, { Demo } from "./pkg/ledid_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

function loadScenario() {
  const layout = document.querySelector("input[name=layout]:checked").value;
  try {
    demo = new Demo(layout === "custom" ? $("toml").value : layout);
  } catch (e) {
    status(String(e.message ?? e), true);
    return;
  }
  status(`${demo.name() || "custom"}: ${demo.tags().length} tags`);
  const select = $("tag");
  select.replaceChildren(...demo.tags().map((t) => new Option(t, t)));
  redraw();
}

function planeCm() {
  return Number($("plane").value);
}

function redraw() {
  if (!demo) return;
  $("plane-out").textContent = planeCm();
  const res = Number($("res").value);
  let gray;
  try {
    gray = demo.heatmap($("tag").value, planeCm(), res);
  } catch (e) {
    status(String(e.message ?? e), true);
    return;
  }
  const canvas = $("map");
  canvas.width = res;
  canvas.height = res;
  const ctx = canvas.getContext("2d");
  const image = ctx.createImageData(res, res);
  for (let iy = 0; iy < res; iy++) {
    for (let ix = 0; ix < res; ix++) {
      const g = gray[iy * res + ix];
      const p = ((res - 1 - iy) * res + ix) * 4;
      image.data[p] = g;
      image.data[p + 1] = g;
      image.data[p + 2] = 255 - (255 - g) / 2;
      image.data[p + 3] = 255;
    }
  }
  ctx.putImageData(image, 0, 0);
  try {
    $("resolve").textContent = demo.resolve(planeCm(), Number($("threshold").value));
  } catch (e) {
    $("resolve").textContent = String(e.message ?? e);
  }
}

function probe(event) {
  if (!demo) return;
  const [x0, x1, y0, y1] = demo.extent();
  const rect = event.target.getBoundingClientRect();
  const x = x0 + ((event.clientX - rect.left) / rect.width) * (x1 - x0);
  const y = y1 - ((event.clientY - rect.top) / rect.height) * (y1 - y0);
  try {
    $("probe").textContent = demo.probe($("tag").value, x, y, planeCm());
  } catch (e) {
    $("probe").textContent = String(e.message ?? e);
  }
}

await init();
for (const radio of document.querySelectorAll("input[name=layout]")) {
  radio.addEventListener("change", loadScenario);
}
$("toml").addEventListener("change", () => {
  document.querySelector("input[value=custom]").checked = true;
  loadScenario();
});
for (const id of ["tag", "plane", "res", "threshold"]) {
  $(id).addEventListener("input", redraw);
}
$("map").addEventListener("click", probe);
loadScenario();
