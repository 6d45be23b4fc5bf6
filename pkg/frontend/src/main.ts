/** Browser entry point: wire the app to the page and the query string. */

import { AnnotationApi } from "./api.js";
import { AnnotationApp } from "./app.js";

function required(params: URLSearchParams, name: string): string {
  const value = params.get(name);
  if (!value) {
    throw new Error(`missing ?${name}= in the URL`);
  }
  return value;
}

const params = new URLSearchParams(window.location.search);
const container = document.getElementById("app");
if (!container) {
  throw new Error("missing #app container");
}
const api = new AnnotationApi(params.get("service") ?? "");
const app = new AnnotationApp(api, container);
app
  .start(required(params, "annotator"), required(params, "dataset"))
  .catch((err) => {
    container.textContent = `Failed to start session: ${err}`;
  });
