/** Browser bootstrap: wire the controller to the real API and the URL bar. */

import { HttpApiClient } from './api.js';
import { App } from './app.js';
import { decodeState } from './state.js';

async function start(): Promise<void> {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app container');
  const app = new App(root, new HttpApiClient(), {
    syncUrl: (queryString) => {
      const url = queryString ? `?${queryString}` : location.pathname;
      history.replaceState(null, '', url);
    },
  });
  await app.boot(decodeState(location.search));
}

void start();
